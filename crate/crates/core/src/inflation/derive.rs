//! Reconstruction of the supertile rule from the substitution matrices and
//! the exact tile geometry.
//!
//! The face matrix dictates each supertile's children (types and rotations);
//! what it does not give is where they sit.  Children are combinatorial
//! hexagons meeting edge to edge, so the placements live on the hexagon
//! lattice.  The search enumerates edge-matched arrangements of the
//! prescribed children and keeps the one whose exact geometry works out:
//! every shared side carries matching edge labels with consistent exact
//! positions, the cluster boundary passes through the half-step images of
//! the parent's corners, and cutting the boundary at those corners yields
//! refinement words that agree across all nine supertiles and abelianize to
//! the edge substitution matrix.

use super::{half_step_c, RuleChild, SupertileRule, HALF_STEP_DEN};
use crate::apdata::{comb_hexagon, m2_star, EdgeType, SlotEdge, Tile};
use crate::geometry::tile_vertices;
use crate::ring::{Quad, RingElement};
use std::collections::{BTreeMap, HashMap, HashSet};

type Cell = (i32, i32);

/// Axial steps to the neighbor across absolute slot j.
const DIRS: [Cell; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

fn add(a: Cell, d: Cell) -> Cell {
    (a.0 + d.0, a.1 + d.1)
}

/// Absolute edge label of a placed tile at an absolute slot.
fn label_at(tile: Tile, rot: u8, abs_slot: u8) -> SlotEdge {
    let s = (abs_slot + 6 - rot) % 6;
    comb_hexagon(tile).slots[s as usize].rotated(rot)
}

/// Two neighboring placements match when the shared side carries the same
/// directed edge class traversed in opposite directions.
fn labels_match(a: SlotEdge, b: SlotEdge) -> bool {
    a.edge == b.edge && a.rot == b.rot && a.sign == -b.sign
}

fn children_of(supertile: Tile) -> Vec<(Tile, u8)> {
    let m2 = m2_star();
    let mut kids = Vec::new();
    for i in 0..9 {
        let p = m2.get(i, supertile.index());
        for (m, &c) in p.c.iter().enumerate() {
            assert!(c >= 0, "face matrix entries are counts");
            for _ in 0..c {
                kids.push((Tile::from_index(i), m as u8));
            }
        }
    }
    kids
}

type Layout = BTreeMap<Cell, (Tile, u8)>;

/// All edge-matched placements of the children on the hexagon lattice,
/// up to translation (the unique Gamma child is pinned to the origin).
fn search_layouts(children: &[(Tile, u8)]) -> Vec<Layout> {
    let gamma_pos = children
        .iter()
        .position(|&(t, m)| t == Tile::Gamma && m == 0)
        .expect("every supertile contains one unrotated Gamma child");
    let mut rest: Vec<(Tile, u8)> = children
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != gamma_pos)
        .map(|(_, &c)| c)
        .collect();
    rest.sort();

    let mut layouts: Vec<Layout> = Vec::new();
    let mut seen: HashSet<Vec<(Cell, Tile, u8)>> = HashSet::new();
    let mut cells: Layout = BTreeMap::new();
    cells.insert((0, 0), (Tile::Gamma, 0));
    let mut used = vec![false; rest.len()];

    fn placeable(cells: &Layout, cell: Cell, tile: Tile, rot: u8) -> bool {
        for (j, d) in DIRS.iter().enumerate() {
            if let Some(&(nt, nm)) = cells.get(&add(cell, *d)) {
                let mine = label_at(tile, rot, j as u8);
                let theirs = label_at(nt, nm, ((j + 3) % 6) as u8);
                if !labels_match(mine, theirs) {
                    return false;
                }
            }
        }
        true
    }

    fn dfs(
        cells: &mut Layout,
        rest: &[(Tile, u8)],
        used: &mut Vec<bool>,
        layouts: &mut Vec<Layout>,
        seen: &mut HashSet<Vec<(Cell, Tile, u8)>>,
    ) {
        if used.iter().all(|&u| u) {
            let key: Vec<(Cell, Tile, u8)> =
                cells.iter().map(|(&c, &(t, m))| (c, t, m)).collect();
            if seen.insert(key) {
                layouts.push(cells.clone());
            }
            return;
        }
        // Frontier cells adjacent to the current cluster.
        let mut frontier: Vec<Cell> = Vec::new();
        for (&c, _) in cells.iter() {
            for d in DIRS {
                let n = add(c, d);
                if !cells.contains_key(&n) && !frontier.contains(&n) {
                    frontier.push(n);
                }
            }
        }
        frontier.sort();
        // Next child: first unused (the list is sorted, duplicates skipped).
        let mut tried: HashSet<(Tile, u8)> = HashSet::new();
        for i in 0..rest.len() {
            if used[i] || tried.contains(&rest[i]) {
                continue;
            }
            tried.insert(rest[i]);
            let (t, m) = rest[i];
            for &cell in &frontier {
                if placeable(cells, cell, t, m) {
                    cells.insert(cell, (t, m));
                    used[i] = true;
                    dfs(cells, rest, used, layouts, seen);
                    used[i] = false;
                    cells.remove(&cell);
                }
            }
        }
    }

    dfs(&mut cells, &rest, &mut used, &mut layouts, &mut seen);
    layouts
}

/// Exact anchor positions of an edge-matched layout; fails when some
/// adjacency loop is geometrically inconsistent.
fn solve_positions(cells: &Layout) -> Option<HashMap<Cell, RingElement>> {
    let mut pos: HashMap<Cell, RingElement> = HashMap::new();
    let first = *cells.keys().next().unwrap();
    pos.insert(first, RingElement::zero());
    let mut queue = vec![first];
    while let Some(c) = queue.pop() {
        let (t, m) = cells[&c];
        let vt = tile_vertices(t);
        for (j, d) in DIRS.iter().enumerate() {
            let n = add(c, *d);
            let Some(&(nt, nm)) = cells.get(&n) else {
                continue;
            };
            // Shared side: my slot j (corners j, j+1), their slot j+3.
            let s_a = ((j as u8) + 6 - m) % 6;
            let s_b = (((j + 3) as u8) + 6 - nm) % 6;
            let nvt = tile_vertices(nt);
            // My corner s_a (start of my side) is their corner s_b + 1 (end
            // of their side), both at absolute positions.
            let mine = &pos[&c] + &vt[s_a as usize].mul_xi_pow(m);
            let theirs_rel = nvt[((s_b + 1) % 6) as usize].mul_xi_pow(nm);
            let want = &mine - &theirs_rel;
            match pos.get(&n) {
                None => {
                    pos.insert(n, want);
                    queue.push(n);
                }
                Some(existing) => {
                    if *existing != want {
                        return None;
                    }
                }
            }
        }
    }
    if pos.len() != cells.len() {
        return None;
    }
    Some(pos)
}

/// Walks the cluster boundary counterclockwise; returns the ordered sides
/// (cell, absolute slot).
fn boundary_walk(cells: &Layout) -> Option<Vec<(Cell, u8)>> {
    let is_boundary =
        |c: Cell, j: u8| -> bool { !cells.contains_key(&add(c, DIRS[j as usize])) };
    let mut start: Option<(Cell, u8)> = None;
    let mut total = 0usize;
    for (&c, _) in cells.iter() {
        for j in 0..6u8 {
            if is_boundary(c, j) {
                total += 1;
                if start.is_none() {
                    start = Some((c, j));
                }
            }
        }
    }
    let start = start?;
    let mut walk = vec![start];
    let mut cur = start;
    loop {
        let (c, j) = cur;
        // Vertex at the end of side (c, j) is corner j+1 of c; the next
        // boundary side continues from there.
        let jn = (j + 1) % 6;
        let next = if is_boundary(c, jn) {
            (c, jn)
        } else {
            let b = add(c, DIRS[jn as usize]);
            debug_assert!(cells.contains_key(&b));
            (b, (j + 5) % 6)
        };
        if next == start {
            break;
        }
        walk.push(next);
        cur = next;
        if walk.len() > total {
            return None;
        }
    }
    if walk.len() != total {
        return None; // boundary is not a single cycle
    }
    Some(walk)
}

fn rev_neg(word: &[SlotEdge]) -> Vec<SlotEdge> {
    word.iter().rev().map(|l| l.reversed()).collect()
}

fn rot_word(word: &[SlotEdge], m: u8) -> Vec<SlotEdge> {
    word.iter().map(|l| l.rotated(m)).collect()
}

struct SupertileSolution {
    children: Vec<RuleChild>,
    words: [Option<Vec<SlotEdge>>; 8],
}

/// Geometric validation and extraction for one candidate layout.
fn validate(supertile: Tile, cells: &Layout) -> Option<SupertileSolution> {
    let pos = solve_positions(cells)?;
    let walk = boundary_walk(cells)?;
    let c = half_step_c();

    // Boundary vertex positions: start corner of each side.
    let side_start = |(cell, j): (Cell, u8)| -> RingElement {
        let (t, m) = cells[&cell];
        let s = (j + 6 - m) % 6;
        &pos[&cell] + &tile_vertices(t)[s as usize].mul_xi_pow(m)
    };
    let verts: Vec<RingElement> = walk.iter().map(|&s| side_start(s)).collect();

    // Targets: half-step images of the parent's corners.
    let parent_corners = tile_vertices(supertile);
    let targets: Vec<RingElement> = parent_corners
        .iter()
        .map(|v| &c * &v.conj())
        .collect();

    // Find the unique translation aligning the corner images with boundary
    // vertices, in the reversed cyclic order 0, 5, 4, 3, 2, 1.
    let n = verts.len();
    let mut solution: Option<(usize, RingElement)> = None;
    for i0 in 0..n {
        let tau = &targets[0] - &verts[i0];
        let mut idxs = vec![i0];
        let mut ok = true;
        for step in 1..6 {
            let want = &targets[(6 - step) % 6] - &tau;
            match verts.iter().position(|v| *v == want) {
                Some(i) => idxs.push(i),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // Corner indices must be in increasing cyclic order from i0.
        let rel: Vec<usize> = idxs.iter().map(|&i| (i + n - i0) % n).collect();
        if rel.windows(2).all(|w| w[0] < w[1]) {
            if solution.is_some() {
                panic!("ambiguous corner alignment for {}", supertile.name());
            }
            solution = Some((i0, tau));
        }
    }
    let (i0, tau) = solution?;

    // Cut the boundary word at the corners: starting from corner 0 the
    // cluster runs along the reversed images of slots 5, 4, ..., 0.
    let letters: Vec<SlotEdge> = walk
        .iter()
        .map(|&(cell, j)| {
            let (t, m) = cells[&cell];
            label_at(t, m, j)
        })
        .collect();
    let corner_pos: Vec<usize> = {
        let mut cp = Vec::with_capacity(6);
        for step in 0..6 {
            let want = &targets[(6 - step) % 6] - &tau;
            cp.push(verts.iter().position(|v| *v == want).unwrap());
        }
        cp
    };
    let hex = comb_hexagon(supertile);
    let mut words: [Option<Vec<SlotEdge>>; 8] = Default::default();
    for seg in 0..6 {
        let from = corner_pos[seg];
        let to = corner_pos[(seg + 1) % 6];
        let mut chain = Vec::new();
        let mut i = from;
        while i != to {
            chain.push(letters[i]);
            i = (i + 1) % n;
        }
        // Segment `seg` runs from corner (6 - seg) % 6 backwards: it is the
        // reversed refinement of parent slot k = 5 - seg.
        let k = 5 - seg;
        let slot = hex.slots[k];
        let w_k = rev_neg(&chain);
        let r_t = if slot.sign > 0 {
            rot_word(&w_k, slot.rot)
        } else {
            rot_word(&rev_neg(&w_k), slot.rot)
        };
        let e = slot.edge.index();
        // The word must abelianize to the matching column of the edge
        // substitution matrix (eta letters compared modulo r^3 + 1).
        let m1 = crate::apdata::m1_star();
        let mut got = [crate::groupring::Poly6::ZERO; 8];
        for l in &r_t {
            got[l.edge.index()] = got[l.edge.index()]
                .add(&crate::groupring::Poly6::monomial(l.sign as i64, l.rot as usize));
        }
        for row in 0..8 {
            let mut want = *m1.get(row, e);
            let mut have = got[row];
            if row == 7 {
                want = want.reduce_negacyclic();
                have = have.reduce_negacyclic();
            }
            if have != want {
                return None;
            }
        }
        match &words[e] {
            None => words[e] = Some(r_t),
            Some(prev) => {
                if prev != &r_t {
                    return None;
                }
            }
        }
    }

    // Assemble children with translated anchors over denominator 3.
    let mut children = Vec::new();
    for (&cell, &(t, m)) in cells.iter() {
        let anchor = &pos[&cell] + &tau;
        let scaled = anchor.scale_int(HALF_STEP_DEN);
        let (nums, den) = scaled.to_integer_coords();
        if den != 1.into() {
            return None;
        }
        let q = Quad::new(
            int64(&nums[0]),
            int64(&nums[1]),
            int64(&nums[2]),
            int64(&nums[3]),
        );
        children.push(RuleChild {
            tile: t,
            rot: m,
            anchor_num: q,
        });
    }
    children.sort_by_key(|k| (k.tile.index(), k.rot, k.anchor_num));
    let _ = i0;
    Some(SupertileSolution { children, words })
}

fn int64(b: &num_bigint::BigInt) -> i64 {
    use num_traits::ToPrimitive;
    b.to_i64().expect("anchor coordinate fits i64")
}

/// Full reconstruction: searches all nine supertiles and assembles the rule.
/// Panics with a diagnostic if the data admits no placement or an ambiguous
/// one, since everything downstream depends on it.
pub fn derive_rule() -> SupertileRule {
    let mut children: [Vec<RuleChild>; 9] = Default::default();
    let mut words: [Option<Vec<SlotEdge>>; 8] = Default::default();
    for s in Tile::ALL {
        let kids = children_of(s);
        let layouts = search_layouts(&kids);
        let mut solutions: Vec<SupertileSolution> = layouts
            .iter()
            .filter_map(|l| validate(s, l))
            .collect();
        assert!(
            !solutions.is_empty(),
            "no geometric layout found for supertile {}",
            s.name()
        );
        assert_eq!(
            solutions.len(),
            1,
            "ambiguous layout for supertile {}",
            s.name()
        );
        let sol = solutions.pop().unwrap();
        children[s.index()] = sol.children;
        for (e, w) in sol.words.into_iter().enumerate() {
            if let Some(w) = w {
                match &words[e] {
                    None => words[e] = Some(w),
                    Some(prev) => assert_eq!(
                        prev,
                        &w,
                        "refinement word of {} differs between supertiles",
                        EdgeType::from_index(e).name()
                    ),
                }
            }
        }
    }
    let edge_words: [Vec<SlotEdge>; 8] = core::array::from_fn(|e| {
        words[e]
            .clone()
            .unwrap_or_else(|| panic!("edge type {e} never appeared on a supertile boundary"))
    });
    let rule = SupertileRule {
        children,
        edge_words,
    };
    let diffs = super::abelianize_diff(&rule);
    assert!(
        diffs.is_empty(),
        "derived rule does not abelianize to the substitution matrices:\n{}",
        diffs.join("\n")
    );
    rule
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn children_lists_match_column_sums() {
        let sums = [7usize, 8, 8, 8, 8, 8, 8, 8, 8];
        for (i, s) in Tile::ALL.iter().enumerate() {
            assert_eq!(children_of(*s).len(), sums[i]);
        }
    }

    #[test]
    fn gamma_delta_adjacency_labels() {
        // Gamma at rot 0 and Delta at rot 5 can share the side across
        // absolute slot 4 (gamma edge at matching rotation, opposite signs).
        let a = label_at(Tile::Gamma, 0, 4);
        let b = label_at(Tile::Delta, 5, (4 + 3) % 6);
        assert!(labels_match(a, b));
    }
}
