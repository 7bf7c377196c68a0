//! Reprojections of patches onto hexagonal target lattices: the
//! regular-hexagon picture and the meta-tile picture.
//!
//! The combinatorial equivalence with a regular hexagon tiling indexes every
//! vertex by a hexagonal lattice point: each directed edge occurrence at
//! rotation rho, of any type, crosses to the neighboring cell through side
//! rho, giving the local rule  edge -> s xi^{rho + 1}.  No linear map of the
//! plane does this (it would collapse the rank-4 edge module onto rank 2),
//! but the vertex map is well defined because every face cycle closes, and
//! its restriction to the return module L is an honest Z-linear map with a
//! rank-2 kernel.  Cycle consistency of the vertex walk is the certificate
//! that the slot reading is right.
//!
//! The meta-tile picture is the coordinate-wise map fixing 1 and xi and
//! sending lambda to 8: vertices land on the hexagon lattice Z[xi] after a
//! displacement of order 8 - lambda, which is why the deformed tiles stay
//! close to the originals.

use crate::apdata::{comb_hexagon, Tile};
use crate::inflation::control::control_points;
use crate::inflation::Patch;
use crate::ring::RingElement;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;

/// An element a + b xi of the target lattice's rational span.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct HexCoord {
    pub a: BigRational,
    pub b: BigRational,
}

impl HexCoord {
    pub fn zero() -> Self {
        HexCoord {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        HexCoord {
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.a.denom().is_one() && self.b.denom().is_one()
    }

    pub fn add(&self, o: &HexCoord) -> HexCoord {
        HexCoord {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &HexCoord) -> HexCoord {
        HexCoord {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn neg(&self) -> HexCoord {
        HexCoord {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn scale_int(&self, n: i64) -> HexCoord {
        let f = BigRational::from_integer(n.into());
        HexCoord {
            a: &self.a * &f,
            b: &self.b * &f,
        }
    }

    /// Squared Euclidean norm in lattice units: |a + b xi|^2 = a^2 + ab + b^2.
    pub fn norm_sqr(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    pub fn embed(&self, unit: Complex64) -> Complex64 {
        let xi = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        unit * (Complex64::new(self.a.to_f64().unwrap(), 0.0) + xi * self.b.to_f64().unwrap())
    }
}

fn eisenstein_power(k: usize) -> HexCoord {
    let (a, b) = match k % 6 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 1),
        3 => (-1, 0),
        4 => (0, -1),
        _ => (1, -1),
    };
    HexCoord::from_ints(a, b)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReprojectionKind {
    /// Regular hexagon cells of side 2 sqrt(15): the vertex-walk map.
    Hexagon,
    /// The coordinate map lambda -> 8 applied to exact positions.
    Metatile,
}

impl ReprojectionKind {
    pub fn name(self) -> &'static str {
        match self {
            ReprojectionKind::Hexagon => "hex",
            ReprojectionKind::Metatile => "metatile",
        }
    }

    /// Complex unit of the target lattice.  The hexagon side length is fixed
    /// by the area requirement (s^2 = 60); its phase is the free convention,
    /// chosen as the correlation-optimal alignment between the original edge
    /// displacements and their hexagon sides so the deformed patch overlays
    /// the original.
    pub fn unit(self) -> Complex64 {
        match self {
            ReprojectionKind::Hexagon => {
                let s = 60.0_f64.sqrt();
                let mut corr = Complex64::new(0.0, 0.0);
                let xi = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
                for tile in Tile::ALL {
                    let hex = comb_hexagon(tile);
                    for (k, slot) in hex.slots.iter().enumerate() {
                        let disp = crate::geometry::slot_displacement(*slot).embed();
                        corr += disp * xi.powu((k as u32 + 2) % 6).conj();
                    }
                }
                s * corr / corr.norm()
            }
            ReprojectionKind::Metatile => Complex64::new(1.0, 0.0),
        }
    }
}

/// The meta-tile map on exact coordinates: a + b xi + c lam + d lam xi
/// goes to (a + 8c) + (b + 8d) xi.
pub fn metatile_image(x: &RingElement) -> HexCoord {
    HexCoord {
        a: &x.coords[0] + BigRational::from_integer(8.into()) * &x.coords[2],
        b: &x.coords[1] + BigRational::from_integer(8.into()) * &x.coords[3],
    }
}

/// A reprojected patch: original combinatorics with target-lattice vertex
/// coordinates and the carried control point tags.
pub struct DeformedPatch {
    pub kind: ReprojectionKind,
    /// Per placement: tile, rotation, six exact vertex images.
    pub tiles: Vec<(Tile, u8, [HexCoord; 6])>,
    /// Control points: (class, orientation, image).  For the hexagon target
    /// these are the images of the representative anchors; for the meta-tile
    /// target the exact images of the control points themselves.
    pub control_points: Vec<(u8, u8, HexCoord)>,
}

impl DeformedPatch {
    pub fn unit(&self) -> Complex64 {
        self.kind.unit()
    }
}

/// Exact vertex key for graph stitching.
fn vkey(v: &RingElement) -> [String; 4] {
    core::array::from_fn(|i| v.coords[i].to_string())
}

/// The vertex-walk images of every patch vertex under the hexagon map.
/// Returns the per-vertex images; panics never, fails with Err when a cycle
/// of the patch is inconsistent with the slot reading.
fn hexagon_vertex_images(patch: &Patch) -> Result<HashMap<[String; 4], HexCoord>, String> {
    // Build the directed edge relations: for every placement side, the two
    // endpoint vertices and the Eisenstein displacement s xi^{rho_abs + 1}
    // (sign folded in).
    struct Relation {
        from: [String; 4],
        to: [String; 4],
        disp: HexCoord,
    }
    let mut relations: Vec<Relation> = Vec::new();
    let mut adjacency: HashMap<[String; 4], Vec<usize>> = HashMap::new();
    for p in &patch.placements {
        let poly = patch.polygon(p);
        let hex = comb_hexagon(p.tile);
        for k in 0..6 {
            let slot = hex.slots[k].rotated(p.rot);
            let a = &poly[k];
            let b = &poly[(k + 1) % 6];
            // CCW displacement sign relative to the directed class.
            let disp = eisenstein_power(slot.rot as usize + 1);
            let disp = if slot.sign > 0 { disp } else { disp.neg() };
            let idx = relations.len();
            relations.push(Relation {
                from: vkey(a),
                to: vkey(b),
                disp,
            });
            adjacency.entry(vkey(a)).or_default().push(idx);
            adjacency.entry(vkey(b)).or_default().push(idx);
        }
    }
    let mut images: HashMap<[String; 4], HexCoord> = HashMap::new();
    let start = relations
        .first()
        .map(|r| r.from.clone())
        .ok_or("empty patch")?;
    images.insert(start.clone(), HexCoord::zero());
    let mut queue = vec![start];
    while let Some(v) = queue.pop() {
        let Some(edges) = adjacency.get(&v) else {
            continue;
        };
        let img_v = images[&v].clone();
        for &i in edges {
            let r = &relations[i];
            let (w, img_w) = if r.from == v {
                (r.to.clone(), img_v.add(&r.disp))
            } else {
                (r.from.clone(), img_v.sub(&r.disp))
            };
            match images.get(&w) {
                None => {
                    images.insert(w.clone(), img_w);
                    queue.push(w);
                }
                Some(existing) => {
                    if *existing != img_w {
                        return Err("vertex walk is inconsistent around a cycle".into());
                    }
                }
            }
        }
    }
    Ok(images)
}

/// Reprojects a patch.  For the hexagon target this runs the vertex walk;
/// for the meta-tile target every exact coordinate maps directly.
pub fn reproject(patch: &Patch, kind: ReprojectionKind) -> Result<DeformedPatch, String> {
    match kind {
        ReprojectionKind::Metatile => {
            let tiles = patch
                .placements
                .iter()
                .map(|p| {
                    let poly = patch.polygon(p);
                    let verts: [HexCoord; 6] = core::array::from_fn(|i| metatile_image(&poly[i]));
                    (p.tile, p.rot, verts)
                })
                .collect();
            let control_points = control_points(patch)
                .into_iter()
                .map(|cp| (cp.class as u8, cp.orientation, metatile_image(&cp.position)))
                .collect();
            Ok(DeformedPatch {
                kind,
                tiles,
                control_points,
            })
        }
        ReprojectionKind::Hexagon => {
            let images = hexagon_vertex_images(patch)?;
            let mut tiles = Vec::with_capacity(patch.len());
            for p in &patch.placements {
                let poly = patch.polygon(p);
                let verts: [HexCoord; 6] =
                    core::array::from_fn(|i| images[&vkey(&poly[i])].clone());
                tiles.push((p.tile, p.rot, verts));
            }
            // Control points transfer as the images of the representative
            // anchors: the hexagon tiling marks exactly the same points.
            let mut control_points = Vec::new();
            for p in &patch.placements {
                if !crate::inflation::is_cluster_rep(p.tile) {
                    continue;
                }
                let class = crate::inflation::cluster_of(p.tile) as u8;
                let anchor = patch.position(p);
                control_points.push((class, p.rot, images[&vkey(&anchor)].clone()));
            }
            Ok(DeformedPatch {
                kind,
                tiles,
                control_points,
            })
        }
    }
}

/// The induced Z-linear map on the return module: images of the four
/// generators of L, recovered from translation-equivalent placement pairs of
/// a patch and certified consistent.
pub fn return_module_map(kind: ReprojectionKind, patch: &Patch) -> Result<[HexCoord; 4], String> {
    let l = crate::zmodule::known::return_module();
    let gens = l.basis_elements();
    match kind {
        ReprojectionKind::Metatile => Ok(core::array::from_fn(|i| metatile_image(&gens[i]))),
        ReprojectionKind::Hexagon => {
            let images = hexagon_vertex_images(patch)?;
            // Observed pairs: same (tile, rot) placements; the difference of
            // anchors lies in L and its image is the difference of images.
            let mut groups: HashMap<(Tile, u8), Vec<(RingElement, HexCoord)>> = HashMap::new();
            for p in &patch.placements {
                let pos = patch.position(p);
                let img = images[&vkey(&pos)].clone();
                groups.entry((p.tile, p.rot)).or_default().push((pos, img));
            }
            // Solve for the generator images from observed (l, image) pairs.
            // Unknowns: 8 rationals (two per generator image).
            let mut rows: Vec<[BigRational; 8]> = Vec::new();
            let mut rhs_a: Vec<BigRational> = Vec::new();
            let mut rhs_b: Vec<BigRational> = Vec::new();
            for members in groups.values() {
                let (base_pos, base_img) = &members[0];
                for (pos, img) in &members[1..] {
                    let diff = pos - base_pos;
                    let coeffs = l_coordinates(&l, &diff)
                        .ok_or("translation between equivalent tiles outside L")?;
                    let mut row = core::array::from_fn(|_| BigRational::zero());
                    for j in 0..4 {
                        row[j] = BigRational::from_integer(coeffs[j].clone());
                    }
                    let d = img.sub(base_img);
                    rows.push(row);
                    rhs_a.push(d.a);
                    rhs_b.push(d.b);
                }
            }
            if rows.len() < 4 {
                return Err("patch too small to pin the return module map".into());
            }
            let sol_a = solve_overdetermined(&rows, &rhs_a, 4)
                .ok_or("return module images inconsistent (a-component)")?;
            let sol_b = solve_overdetermined(&rows, &rhs_b, 4)
                .ok_or("return module images inconsistent (b-component)")?;
            Ok(core::array::from_fn(|i| HexCoord {
                a: sol_a[i].clone(),
                b: sol_b[i].clone(),
            }))
        }
    }
}

fn l_coordinates(l: &crate::zmodule::ZModule4, x: &RingElement) -> Option<[BigInt; 4]> {
    let d = BigRational::from_integer(l.den.clone());
    let mut b = Vec::with_capacity(4);
    for j in 0..4 {
        let v = &x.coords[j] * &d;
        if !v.denom().is_one() {
            return None;
        }
        b.push(v.to_integer());
    }
    let sol = l.basis.solve_left(&b)?;
    Some(core::array::from_fn(|i| sol[i].clone()))
}

/// Solves a consistent overdetermined rational system with `n` unknowns;
/// unknowns in non-pivot columns are set to zero.
fn solve_overdetermined(
    rows: &[[BigRational; 8]],
    rhs: &[BigRational],
    n: usize,
) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v: Vec<BigRational> = r[..n].to_vec();
            v.push(b.clone());
            v
        })
        .collect();
    let mut rank = 0usize;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pv = m[rank][col].clone();
        for j in col..=n {
            m[rank][j] = &m[rank][j] / &pv;
        }
        for i in 0..m.len() {
            if i == rank || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..=n {
                let v = &m[rank][j] * &f;
                m[i][j] -= v;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    for row in m.iter().skip(rank) {
        if !row[n].is_zero() {
            return None;
        }
    }
    let mut y = vec![BigRational::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        y[col] = m[r][n].clone();
    }
    Some(y)
}

/// Mean distance between the original vertices and their reprojected images
/// in physical units (both maps anchored at the patch origin).
pub fn mean_vertex_displacement(patch: &Patch, kind: ReprojectionKind) -> Result<f64, String> {
    let deformed = reproject(patch, kind)?;
    let unit = kind.unit();
    let mut total = 0.0;
    let mut n = 0usize;
    for (p, (_, _, verts)) in patch.placements.iter().zip(&deformed.tiles) {
        let poly = patch.polygon(p);
        for (v, img) in poly.iter().zip(verts.iter()) {
            total += (img.embed(unit) - v.embed()).norm();
            n += 1;
        }
    }
    Ok(total / n as f64)
}
