//! Control points: one marked point per tile cluster, chosen so that every
//! control point of a tiling lies in a single translation orbit of the
//! return module L.
//!
//! The cluster representative (the first member tile) carries the point at
//! offset delta_class in its own frame.  The offsets are not forced pointwise
//! by the construction, only up to L; the derivation solves the orbit
//! constraint on a finite patch and the committed values are re-checked
//! against larger patches in tests.

use super::{cluster_of, generate_patch, is_cluster_rep, Patch};
use crate::apdata::Tile;
use crate::intmatrix::IntMatrix;
use crate::ring::RingElement;
use crate::zmodule::known;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::sync::OnceLock;

/// One placed control point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlPoint {
    pub class: usize,
    pub orientation: u8,
    pub position: RingElement,
}

/// Control-point offsets per cluster class, in the representative's frame.
pub fn control_offsets() -> &'static [RingElement; 5] {
    static OFFSETS: OnceLock<[RingElement; 5]> = OnceLock::new();
    OFFSETS.get_or_init(|| {
        parse_offsets(include_str!("../../data/control_points.txt"))
            .expect("embedded control point data must parse")
    })
}

pub fn parse_offsets(text: &str) -> Result<[RingElement; 5], String> {
    let mut out: [Option<RingElement>; 5] = Default::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let err = |m: &str| format!("line {}: {}", lineno + 1, m);
        match it.next().unwrap() {
            "version" => {}
            "offset" => {
                let class: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad class"))?;
                let mut c = [0i64; 4];
                for slot in c.iter_mut() {
                    *slot = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err("bad coord"))?;
                }
                let den: i64 = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad denominator"))?;
                if class >= 5 {
                    return Err(err("class out of range"));
                }
                out[class] = Some(RingElement::from_ints_over(c, den));
            }
            _ => return Err(err("unknown keyword")),
        }
    }
    let mut result: [RingElement; 5] = core::array::from_fn(|_| RingElement::zero());
    for (i, v) in out.into_iter().enumerate() {
        result[i] = v.ok_or_else(|| format!("missing offset for class {i}"))?;
    }
    Ok(result)
}

pub fn render_offsets(offsets: &[RingElement; 5]) -> String {
    let mut s = String::from(
        "# Control point offsets per cluster class, representative frame.\n# offset <class> <4 numerators> <denominator>\nversion 1\n",
    );
    for (i, o) in offsets.iter().enumerate() {
        let (nums, den) = o.to_integer_coords();
        s.push_str(&format!(
            "offset {} {} {} {} {} {}\n",
            i, nums[0], nums[1], nums[2], nums[3], den
        ));
    }
    s
}

/// Control points of a patch: one per cluster-representative placement.
pub fn control_points(patch: &Patch) -> Vec<ControlPoint> {
    let offsets = control_offsets();
    let mut out = Vec::new();
    for p in &patch.placements {
        if !is_cluster_rep(p.tile) {
            continue;
        }
        let class = cluster_of(p.tile);
        let pos = patch.position(p) + offsets[class].mul_xi_pow(p.rot);
        out.push(ControlPoint {
            class,
            orientation: p.rot,
            position: pos,
        });
    }
    out
}

/// Derives control offsets: solve the single-orbit constraint on a 4-step
/// patch (all pairwise control point differences in L), then pick the coset
/// representatives assembling the window system into a fundamental domain.
pub fn derive_control_offsets() -> [RingElement; 5] {
    let mut sol = particular_offsets();
    for o in sol.iter_mut() {
        *o = smallest_mod_l(o);
    }
    refine_snug(sol)
}

/// A particular solution of the orbit constraint (each offset determined
/// modulo L).
pub fn particular_offsets() -> [RingElement; 5] {
    for denominator in [1i64, 3] {
        if let Some(sol) = solve_offsets(denominator) {
            return sol;
        }
    }
    panic!("no control-point offsets in (1/3) O satisfy the orbit constraint");
}

fn solve_offsets(denominator: i64) -> Option<[RingElement; 5]> {
    let patch = generate_patch(Tile::Psi, 4).expect("derivation patch");
    let insts: Vec<(usize, u8, RingElement)> = patch
        .placements
        .iter()
        .filter(|p| is_cluster_rep(p.tile))
        .map(|p| (cluster_of(p.tile), p.rot, patch.position(p)))
        .collect();
    assert!(insts.len() > 30);
    // Keep the system small: the constraints repeat quickly, a prefix is
    // plenty and the result is verified on the full patch afterwards.
    let limit = 160.min(insts.len());
    let insts = &insts[..limit];

    let l = known::return_module();
    let l_basis = l.basis_elements();
    let (class0, rot0, z0) = insts[0].clone();
    let constraints: Vec<(usize, u8, RingElement)> = insts[1..]
        .iter()
        .map(|(cl, m, z)| (*cl, *m, z.clone()))
        .collect();
    let n_con = constraints.len();
    // Unknown row u: 20 offset numerators (delta = sum u_j basis_j / den)
    // then 4 L-coefficients per constraint.
    let n_unknowns = 20 + 4 * n_con;
    let n_eqs = 4 * n_con;
    let mut a = IntMatrix::zero(n_unknowns, n_eqs);
    let mut b = vec![BigInt::from(0); n_eqs];
    let basis = [
        RingElement::from_ints(1, 0, 0, 0),
        RingElement::from_ints(0, 1, 0, 0),
        RingElement::from_ints(0, 0, 1, 0),
        RingElement::from_ints(0, 0, 0, 1),
    ];
    let put = |a: &mut IntMatrix, row: usize, con: usize, v: &RingElement, scale: i64| {
        let scaled = v.scale_int(scale);
        let (nums, den) = scaled.to_integer_coords();
        assert!(den == 1.into(), "unexpected denominator in constraint row");
        for j in 0..4 {
            a[(row, 4 * con + j)] += nums[j].clone();
        }
    };
    for (ci, (cl, m, z)) in constraints.iter().enumerate() {
        // xi^m delta_cl - xi^rot0 delta_class0 + L l_ci = (z0 - z) * den
        for bj in 0..4 {
            let col_plus = basis[bj].mul_xi_pow(*m);
            put(&mut a, 4 * cl + bj, ci, &col_plus, 1);
            let col_minus = basis[bj].mul_xi_pow(rot0);
            put(&mut a, 4 * class0 + bj, ci, &(-col_minus), 1);
        }
        for (lj, lb) in l_basis.iter().enumerate() {
            put(&mut a, 20 + 4 * ci + lj, ci, &lb.scale_int(denominator), 1);
        }
        let rhs = (&z0 - z).scale_int(denominator);
        let (nums, den) = rhs.to_integer_coords();
        assert!(den == 1.into());
        for j in 0..4 {
            b[4 * ci + j] = nums[j].clone();
        }
    }
    let u = a.solve_left(&b)?;
    let mut offsets: [RingElement; 5] = core::array::from_fn(|_| RingElement::zero());
    for cl in 0..5 {
        let mut acc = RingElement::zero();
        for bj in 0..4 {
            let coef = u[4 * cl + bj].to_i64().expect("offset numerator fits i64");
            acc += &basis[bj].scale_int(coef);
        }
        offsets[cl] = acc.scale(&num_rational::BigRational::new(
            1.into(),
            denominator.into(),
        ));
    }
    Some(offsets)
}

/// Star-projected anchor clouds per (class, orientation) with zero offsets:
/// the raw material of the subwindows (each true subwindow is a translate of
/// its anchor cloud's closure).
fn anchor_clouds(steps: u32) -> Vec<Vec<(f64, f64)>> {
    let mut clouds: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 30];
    let cloud = crate::cps::window_stream_with_offsets(
        Tile::Psi,
        steps,
        &core::array::from_fn(|_| RingElement::zero()),
    );
    for p in cloud.points {
        clouds[p.class as usize * 6 + p.orientation as usize].push((p.x, p.y));
    }
    clouds
}

/// Snugness score on the window torus.  The union of the subwindows must be
/// a fundamental domain of the triangular lattice generated by the internal
/// image of star(d), d the window generator: the score counts occupied torus
/// cells plus a strong penalty for cells where two subwindows both have
/// interior mass.  A mild planar spread term breaks ties between equivalent
/// fundamental domains.
fn snug_score(clouds: &[Vec<(f64, f64)>], offsets: &[RingElement; 5], n_cells: i64) -> i64 {
    use std::collections::HashMap;
    let d = RingElement::from_ints(31, 4, -4, -1);
    let w1 = d.star().embed_internal();
    let w2 = d.star().mul_xi().embed_internal();
    let det = w1.re * w2.im - w1.im * w2.re;
    let to_torus = |x: f64, y: f64| -> (i64, i64) {
        let a = (x * w2.im - y * w2.re) / det;
        let b = (-x * w1.im + y * w1.re) / det;
        let fa = a - a.floor();
        let fb = b - b.floor();
        (
            ((fa * n_cells as f64) as i64).min(n_cells - 1),
            ((fb * n_cells as f64) as i64).min(n_cells - 1),
        )
    };
    // Per torus cell: points of the heaviest subwindow and of all others.
    let mut cells: HashMap<(i64, i64), HashMap<u8, u32>> = HashMap::new();
    let mut sum = (0.0f64, 0.0f64);
    let mut sumsq = 0.0f64;
    let mut count = 0usize;
    for class in 0..5 {
        for m in 0..6u8 {
            let id = (class * 6) as u8 + m;
            let shift = offsets[class].mul_xi_pow(m).embed_internal();
            for &(x, y) in &clouds[class * 6 + m as usize] {
                let (px, py) = (x + shift.re, y + shift.im);
                let c = to_torus(px, py);
                *cells.entry(c).or_default().entry(id).or_insert(0) += 1;
                sum.0 += px;
                sum.1 += py;
                sumsq += px * px + py * py;
                count += 1;
            }
        }
    }
    let occupied = cells.len() as i64;
    // A cell counts as a genuine overlap when a second subwindow has more
    // than a grazing presence there.
    let mut overlap = 0i64;
    for by_class in cells.values() {
        if by_class.len() < 2 {
            continue;
        }
        let mut counts: Vec<u32> = by_class.values().copied().collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        if counts[1] >= 2 {
            overlap += counts[1] as i64;
        }
    }
    let mean2 = (sum.0 / count as f64).powi(2) + (sum.1 / count as f64).powi(2);
    let variance = sumsq / count as f64 - mean2;
    occupied + 4 * overlap + (3.0 * variance) as i64
}

/// Candidate coset representatives around a base offset.  Assembling the
/// window needs fine internal-space moves, which correspond to lattice
/// translates of large physical size, so candidates are ranked by internal
/// norm first with only a loose physical bound.
fn coset_candidates(base: &RingElement, max_count: usize) -> Vec<RingElement> {
    let l = known::return_module();
    let basis = l.basis_elements();
    let mut out = Vec::new();
    let range = 3i64;
    for d0 in -range..=range {
        for d1 in -range..=range {
            for d2 in -range..=range {
                for d3 in -range..=range {
                    let mut cand = base.clone();
                    for (i, &c) in [d0, d1, d2, d3].iter().enumerate() {
                        if c != 0 {
                            cand -= &basis[i].scale_int(c);
                        }
                    }
                    let phys = cand.embed().norm();
                    let int = cand.embed_internal().norm();
                    if phys < 100.0 && int < 4.0 {
                        out.push(cand);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        let ka = (a.embed_internal().norm_sqr(), a.embed().norm_sqr());
        let kb = (b.embed_internal().norm_sqr(), b.embed().norm_sqr());
        ka.partial_cmp(&kb).unwrap()
    });
    out.truncate(max_count);
    out
}

/// Snugness refinement: pairwise coordinate descent (simultaneous moves of
/// two classes escape the local minima that single moves cannot), then
/// single-class polish over finer torus grids.
fn refine_snug(start: [RingElement; 5]) -> [RingElement; 5] {
    let coarse = anchor_clouds(6);
    let fine_full = anchor_clouds(8);
    let subsample = |clouds: &[Vec<(f64, f64)>], stride: usize| -> Vec<Vec<(f64, f64)>> {
        clouds
            .iter()
            .map(|c| c.iter().copied().step_by(stride).collect())
            .collect()
    };
    let coarse_thin = subsample(&coarse, 2);
    let fine = subsample(&fine_full, 8);
    let mut best = start;

    // Stage 1: pair moves on a thin cloud at a coarse torus grid.
    let mut best_score = snug_score(&coarse_thin, &best, 48);
    for _round in 0..3 {
        let mut improved = false;
        for i in 0..5usize {
            for j in (i + 1)..5 {
                let ci = coset_candidates(&best[i], 40);
                let cj = coset_candidates(&best[j], 40);
                for a in &ci {
                    for b in &cj {
                        if a == &best[i] && b == &best[j] {
                            continue;
                        }
                        let mut trial = best.clone();
                        trial[i] = a.clone();
                        trial[j] = b.clone();
                        let score = snug_score(&coarse_thin, &trial, 48);
                        if score < best_score {
                            best_score = score;
                            best = trial;
                            improved = true;
                        }
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }

    // Stage 2: single-class polish over finer grids and denser clouds.
    let levels: [(&[Vec<(f64, f64)>], i64, usize, usize); 3] = [
        (&coarse, 48, 120, 2),
        (&fine, 128, 60, 2),
        (&fine, 256, 30, 2),
    ];
    for (clouds, n_cells, n_cands, rounds) in levels {
        let mut score_here = snug_score(clouds, &best, n_cells);
        for _round in 0..rounds {
            let mut improved = false;
            for class in 0..5 {
                let candidates = coset_candidates(&best[class], n_cands);
                for cand in candidates {
                    if cand == best[class] {
                        continue;
                    }
                    let mut trial = best.clone();
                    trial[class] = cand;
                    let score = snug_score(clouds, &trial, n_cells);
                    if score < score_here {
                        score_here = score;
                        best = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    best
}

/// The minimal-norm representative of x + L under the trace form, by
/// rounding in lattice coordinates and searching a small surrounding box.
pub fn smallest_mod_l(x: &RingElement) -> RingElement {
    let l = known::return_module();
    let basis = l.basis_elements();
    let lift = |z: &RingElement| -> [f64; 4] {
        let p = z.embed();
        let q = z.embed_internal();
        [p.re, p.im, q.re, q.im]
    };
    let b: Vec<[f64; 4]> = basis.iter().map(|g| lift(g)).collect();
    let t = lift(x);
    let mut gram = [[0.0f64; 4]; 4];
    let mut rhs = [0.0f64; 4];
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = (0..4).map(|k| b[i][k] * b[j][k]).sum();
        }
        rhs[i] = (0..4).map(|k| b[i][k] * t[k]).sum();
    }
    let coeffs = solve4(gram, rhs);
    let mut best: Option<(f64, RingElement)> = None;
    let range = 2i64;
    for d0 in -range..=range {
        for d1 in -range..=range {
            for d2 in -range..=range {
                for d3 in -range..=range {
                    let c = [
                        coeffs[0].round() as i64 + d0,
                        coeffs[1].round() as i64 + d1,
                        coeffs[2].round() as i64 + d2,
                        coeffs[3].round() as i64 + d3,
                    ];
                    let mut cand = x.clone();
                    for (i, &ci) in c.iter().enumerate() {
                        if ci != 0 {
                            cand -= &basis[i].scale_int(ci);
                        }
                    }
                    let v = lift(&cand);
                    let norm: f64 = v.iter().map(|y| y * y).sum();
                    let better = match &best {
                        None => true,
                        Some((bn, bc)) => {
                            norm < bn - 1e-9
                                || ((norm - bn).abs() <= 1e-9
                                    && format!("{cand:?}") < format!("{bc:?}"))
                        }
                    };
                    if better {
                        best = Some((norm, cand));
                    }
                }
            }
        }
    }
    best.unwrap().1
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> [f64; 4] {
    for k in 0..4 {
        let mut piv = k;
        for i in k + 1..4 {
            if a[i][k].abs() > a[piv][k].abs() {
                piv = i;
            }
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..4 {
            let f = a[i][k] / a[k][k];
            for j in k..4 {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = [0.0f64; 4];
    for k in (0..4).rev() {
        let mut s = b[k];
        for j in k + 1..4 {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    x
}

/// Reduces an element modulo the return module L (greedy against the HNF
/// basis; used for canonical reporting).
pub fn reduce_mod_l(x: &RingElement) -> RingElement {
    let l = known::return_module();
    let basis = l.basis_elements();
    let mut v = x.clone();
    for b in basis.iter().rev() {
        let (bn, _) = b.to_integer_coords();
        let pivot_col = (0..4)
            .find(|&j| bn[j] != 0.into())
            .expect("basis row nonzero");
        let coord = v.coords[pivot_col].clone();
        let pivot = num_rational::BigRational::from_integer(bn[pivot_col].clone());
        let q = (coord / pivot).floor();
        if q != num_rational::BigRational::from_integer(0.into()) {
            let qi = q.to_integer();
            v -= &b.scale(&num_rational::BigRational::from_integer(qi));
        }
    }
    v
}

/// The stable within-cluster geometry: for each member tile, the placement of
/// its cluster representative relative to the member's own frame, derived
/// from the rule (same-supertile members) or from a patch (the cross-supertile
/// pairs), and asserted constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberRelation {
    /// rep rotation minus member rotation, mod 6.
    pub rot_offset: u8,
    /// rep anchor minus member anchor, in the member's frame.
    pub offset: RingElement,
}

pub fn member_relations() -> &'static [MemberRelation; 9] {
    static REL: OnceLock<[MemberRelation; 9]> = OnceLock::new();
    REL.get_or_init(derive_member_relations)
}

fn derive_member_relations() -> [MemberRelation; 9] {
    let mut rel: [Option<MemberRelation>; 9] = Default::default();
    for t in Tile::ALL {
        if is_cluster_rep(t) {
            rel[t.index()] = Some(MemberRelation {
                rot_offset: 0,
                offset: RingElement::zero(),
            });
        }
    }
    // Same-supertile members (Delta and Sigma pair with their Gamma).
    let r = super::rule();
    for kids in r.children.iter() {
        let gamma = kids
            .iter()
            .find(|k| k.tile == Tile::Gamma)
            .expect("every supertile holds a Gamma");
        for k in kids {
            if k.tile == Tile::Delta || k.tile == Tile::Sigma {
                let rot_offset = (gamma.rot + 6 - k.rot) % 6;
                let offset = (&gamma.anchor() - &k.anchor()).mul_xi_pow((6 - k.rot) % 6);
                let candidate = MemberRelation { rot_offset, offset };
                match &rel[k.tile.index()] {
                    None => rel[k.tile.index()] = Some(candidate),
                    Some(prev) => assert_eq!(
                        prev,
                        &candidate,
                        "{} sits differently relative to Gamma across supertiles",
                        k.tile.name()
                    ),
                }
            }
        }
    }
    // Cross-supertile members: Lambda pairs with a Theta, Pi with a Xi.
    let patch = generate_patch(Tile::Psi, 4).expect("relation patch");
    for (member, rep) in [(Tile::Lambda, Tile::Theta), (Tile::Pi, Tile::Xi)] {
        let reps: Vec<(u8, RingElement)> = patch
            .placements
            .iter()
            .filter(|p| p.tile == rep)
            .map(|p| (p.rot, patch.position(p)))
            .collect();
        let mut counts: std::collections::HashMap<(u8, [String; 4]), (usize, MemberRelation)> =
            std::collections::HashMap::new();
        for p in patch.placements.iter().filter(|p| p.tile == member) {
            let z = patch.position(p);
            let mut best: Option<(f64, &(u8, RingElement))> = None;
            for r in &reps {
                let d = (r.1.embed() - z.embed()).norm();
                if best.map(|(bd, _)| d < bd).unwrap_or(true) {
                    best = Some((d, r));
                }
            }
            let (_, (rrot, rpos)) = best.expect("patch contains reps");
            let rot_offset = (*rrot + 6 - p.rot) % 6;
            let offset = (rpos - &z).mul_xi_pow((6 - p.rot) % 6);
            let key = (
                rot_offset,
                core::array::from_fn(|i| offset.coords[i].to_string()),
            );
            let e = counts
                .entry(key)
                .or_insert((0, MemberRelation { rot_offset, offset }));
            e.0 += 1;
        }
        let (best_count, best_rel) = counts
            .values()
            .max_by_key(|(c, _)| *c)
            .expect("some member present")
            .clone();
        let total: usize = counts.values().map(|(c, _)| c).sum();
        assert!(
            best_count * 10 >= total * 9,
            "{} -> {} pairing not overwhelmingly constant ({best_count}/{total})",
            member.name(),
            rep.name()
        );
        rel[member.index()] = Some(best_rel);
    }
    core::array::from_fn(|i| rel[i].clone().expect("relation for every tile"))
}

/// The control point of the cluster containing an arbitrary placed tile.
pub fn cluster_point_of(tile: Tile, rot: u8, pos: &RingElement) -> ControlPoint {
    let rel = &member_relations()[tile.index()];
    let offsets = control_offsets();
    let class = cluster_of(tile);
    let rep_rot = (rot + rel.rot_offset) % 6;
    let rep_pos = pos + &rel.offset.mul_xi_pow(rot);
    ControlPoint {
        class,
        orientation: rep_rot,
        position: rep_pos + offsets[class].mul_xi_pow(rep_rot),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apdata::Tile;
    use crate::inflation::cluster_rep;

    #[test]
    fn offsets_data_solves_the_orbit_constraint() {
        // The committed offsets must lie in the same L-cosets as a freshly
        // solved particular solution; the expensive fundamental-domain
        // refinement only picks coset representatives, so this pins the data
        // up to exactly the freedom the construction allows.  The assembled
        // window quality is covered by the acceptance criteria.
        let committed = control_offsets();
        if std::env::var("CASPR_REGEN").is_ok() {
            let derived = derive_control_offsets();
            let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/control_points.txt");
            std::fs::write(path, render_offsets(&derived)).unwrap();
            assert_eq!(control_offsets(), &derived);
            return;
        }
        let particular = particular_offsets();
        let l = known::return_module();
        for (c, p) in committed.iter().zip(&particular) {
            assert!(
                l.contains(&(c - p)),
                "committed offset in the wrong L-coset"
            );
        }
    }

    #[test]
    fn control_points_lie_in_one_l_orbit() {
        let l = known::return_module();
        let patch = generate_patch(Tile::Gamma, 4).unwrap();
        let cps = control_points(&patch);
        assert!(cps.len() > 100);
        let first = &cps[0].position;
        for cp in &cps[1..] {
            assert!(
                l.contains(&(&cp.position - first)),
                "control point difference outside L"
            );
        }
    }

    #[test]
    fn orbit_constraint_holds_on_a_larger_patch_too() {
        let l = known::return_module();
        let patch = generate_patch(Tile::Phi, 6).unwrap();
        let cps = control_points(&patch);
        let first = &cps[0].position;
        // Spot check a deterministic stride; over a thousand pairs.
        assert!(cps.len() > 1000);
        for cp in cps.iter().step_by(7) {
            assert!(l.contains(&(&cp.position - first)));
        }
    }

    #[test]
    fn member_relations_are_consistent() {
        let rel = member_relations();
        // Reps map to themselves.
        for class in 0..5 {
            let rep = cluster_rep(class);
            assert_eq!(rel[rep.index()].rot_offset, 0);
            assert!(rel[rep.index()].offset.is_zero());
        }
        // Every member of a 4-step patch resolves to a rep-cluster point
        // that is also produced directly.
        let patch = generate_patch(Tile::Psi, 4).unwrap();
        let direct: std::collections::HashSet<String> = control_points(&patch)
            .into_iter()
            .map(|c| format!("{:?}{:?}", c.class, c.position))
            .collect();
        let mut misses = 0usize;
        let mut total = 0usize;
        for p in &patch.placements {
            let cp = cluster_point_of(p.tile, p.rot, &patch.position(p));
            total += 1;
            if !direct.contains(&format!("{:?}{:?}", cp.class, cp.position)) {
                misses += 1; // cluster partner outside the finite patch
            }
        }
        assert!(
            misses * 20 < total,
            "too many unmatched cluster points: {misses}/{total}"
        );
    }
}
