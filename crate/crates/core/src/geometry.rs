//! Geometric realization of the nine meta-tiles from the exact edge vectors,
//! tile areas, the Tile(a,b) polygon family, and exact polygon predicates.
//!
//! Tile vertices live in the order Z[xi, lambda]; their embeddings have the
//! form (u, v sqrt(3)/2) with u, v in Q(sqrt(15)), so orientation and
//! intersection predicates can be decided exactly.

use crate::apdata::{comb_hexagon, EdgeType, SlotEdge, Tile};
use crate::ring::{RealQuadratic, RingElement};
use crate::zmodule::ZModule4;
use num_complex::Complex64;

/// The eight edge vectors in coordinates over (1, xi, lambda, lambda xi).
pub const EDGE_VECTOR_COORDS: [[i64; 4]; 8] = [
    [0, 2, 1, -1],  // alpha = 2 xi + (1 - xi) lambda
    [1, -3, 0, 1],  // beta = 1 - 3 xi + xi lambda
    [-2, 4, 2, -1], // gamma = -2 + 4 xi + (2 - xi) lambda
    [-9, 3, 3, 0],  // delta = -9 + 3 xi + 3 lambda
    [1, -1, 1, 0],  // epsilon = 1 - xi + lambda
    [-1, -4, 1, 1], // zeta = -1 - 4 xi + (1 + xi) lambda
    [-1, 1, 2, 0],  // theta = -1 + xi + 2 lambda
    [1, 2, 1, 0],   // eta = 1 + 2 xi + lambda
];

pub fn edge_vector_base(e: EdgeType) -> RingElement {
    let c = EDGE_VECTOR_COORDS[e.index()];
    RingElement::from_ints(c[0], c[1], c[2], c[3])
}

/// xi^m * e_type; for eta the relation r^3 eta = -eta is automatic because
/// xi^3 = -1 on the geometric side.
pub fn edge_vector(e: EdgeType, m: u8) -> RingElement {
    assert!(m < 6, "rotation power out of range");
    edge_vector_base(e).mul_xi_pow(m)
}

/// Displacement of a traversed edge occurrence.
pub fn slot_displacement(s: SlotEdge) -> RingElement {
    let v = edge_vector(s.edge, s.rot);
    if s.sign < 0 {
        -v
    } else {
        v
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Handedness {
    Right,
    Left,
}

impl Handedness {
    pub fn flipped(self) -> Handedness {
        match self {
            Handedness::Right => Handedness::Left,
            Handedness::Left => Handedness::Right,
        }
    }
}

/// One placed meta-tile polygon with exact vertices.
#[derive(Clone, Debug)]
pub struct GeomTile {
    pub tile: Tile,
    pub rotation: u8,
    pub handedness: Handedness,
    pub vertices: Vec<RingElement>,
}

/// Vertex chain of the standard right-handed tile: corner 0 at the origin,
/// then the six slot displacements in order.
pub fn tile_vertices(tile: Tile) -> [RingElement; 6] {
    let hex = comb_hexagon(tile);
    let mut v = RingElement::zero();
    let mut out: [RingElement; 6] = core::array::from_fn(|_| RingElement::zero());
    for k in 0..6 {
        out[k] = v.clone();
        v += &slot_displacement(hex.slots[k]);
    }
    out
}

pub fn tile_polygon(tile: Tile, rotation: u8, handedness: Handedness) -> GeomTile {
    assert!(rotation < 6);
    let base = tile_vertices(tile);
    let vertices: Vec<RingElement> = base
        .iter()
        .map(|v| {
            let r = v.mul_xi_pow(rotation);
            match handedness {
                Handedness::Right => r,
                Handedness::Left => r.conj(),
            }
        })
        .collect();
    GeomTile {
        tile,
        rotation,
        handedness,
        vertices,
    }
}

impl GeomTile {
    /// Boundary closes: the sum of the six displacements vanishes.
    pub fn closes(&self) -> bool {
        let hex = comb_hexagon(self.tile);
        let mut acc = RingElement::zero();
        for s in hex.slots {
            acc += &slot_displacement(s);
        }
        acc.is_zero()
    }

    pub fn embedded(&self) -> Vec<Complex64> {
        self.vertices.iter().map(|v| v.embed()).collect()
    }
}

/// Area of the standard tile polygon as the exact coefficient of sqrt(3):
/// area = coeff * sqrt(3), with coeff in Q(sqrt(15)).
pub fn tile_area_sqrt3(tile: Tile) -> RealQuadratic {
    polygon_area_sqrt3(&tile_vertices(tile))
}

/// Shoelace area of an exact polygon, as the coefficient of sqrt(3).
pub fn polygon_area_sqrt3(vertices: &[RingElement]) -> RealQuadratic {
    // 2 * signed area = sum Im(conj(v_i) v_{i+1}); each Im is a
    // (sqrt(3)/2)-multiple of a Q(sqrt(15)) value, so area = (sqrt(3)/4)|sum|.
    let n = vertices.len();
    let mut acc = RealQuadratic::zero();
    for i in 0..n {
        let w = vertices[i].conj() * vertices[(i + 1) % n].clone();
        acc = acc.add(&w.im_part_sqrt3_halves());
    }
    let quarter = num_rational::BigRational::new(1.into(), 4.into());
    acc.abs().scale(&quarter)
}

/// All nine tile areas in tile order.
pub fn tile_areas() -> [RealQuadratic; 9] {
    core::array::from_fn(|i| tile_area_sqrt3(Tile::from_index(i)))
}

/// The edge module E spanned by the eight edge vectors.
pub fn edge_module() -> ZModule4 {
    let gens: Vec<RingElement> = EdgeType::ALL.iter().map(|&e| edge_vector_base(e)).collect();
    ZModule4::from_generators(&gens)
}

/// An exact planar point (x + y * i sqrt(3)/2) with x, y in Q(sqrt(15)).
/// Every vertex of an exact tile has this shape.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactPoint {
    pub x: RealQuadratic,
    pub y: RealQuadratic,
}

impl ExactPoint {
    pub fn from_ring(z: &RingElement) -> Self {
        ExactPoint {
            x: z.re_part(),
            y: z.im_part_sqrt3_halves(),
        }
    }

    fn sub(&self, o: &ExactPoint) -> ExactPoint {
        ExactPoint {
            x: self.x.sub(&o.x),
            y: self.y.sub(&o.y),
        }
    }
}

/// Sign of the cross product (b - a) x (c - a); exact.
pub fn orient(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> i32 {
    let u = b.sub(a);
    let v = c.sub(a);
    // cross = u.x v.y - v.x u.y, up to the positive factor sqrt(3)/2.
    u.x.mul(&v.y).sub(&v.x.mul(&u.y)).signum()
}

fn on_segment(a: &ExactPoint, b: &ExactPoint, p: &ExactPoint) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    // p between a and b: (p - a).(p - b) <= 0 with the exact dot product
    // dx1 dx2 + (3/4) dy1 dy2.
    let u = p.sub(a);
    let v = p.sub(b);
    let three_quarter = num_rational::BigRational::new(3.into(), 4.into());
    let dot = u.x.mul(&v.x).add(&u.y.mul(&v.y).scale(&three_quarter));
    dot.signum() <= 0
}

fn segments_cross(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint, d: &ExactPoint) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    // Touching or collinear overlap counts as a crossing for simplicity
    // testing; the caller excludes shared polygon endpoints.
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Exact simplicity test for a closed polygon with ring-element vertices.
pub fn is_simple_exact(vertices: &[RingElement]) -> bool {
    let pts: Vec<ExactPoint> = vertices.iter().map(ExactPoint::from_ring).collect();
    let n = pts.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let next_i = (i + 1) % n;
            let next_j = (j + 1) % n;
            if i == j || next_i == j || next_j == i {
                continue;
            }
            if segments_cross(&pts[i], &pts[next_i], &pts[j], &pts[next_j]) {
                return false;
            }
        }
    }
    true
}

/// Exact strict-interior test by crossing number with a horizontal ray.
pub fn point_in_polygon_exact(vertices: &[RingElement], point: &RingElement) -> bool {
    let pts: Vec<ExactPoint> = vertices.iter().map(ExactPoint::from_ring).collect();
    let p = ExactPoint::from_ring(point);
    let n = pts.len();
    let mut inside = false;
    for i in 0..n {
        let a = &pts[i];
        let b = &pts[(i + 1) % n];
        // Point on the boundary counts as outside.
        if on_segment(a, b, &p) {
            return false;
        }
        let ya = a.y.sub(&p.y).signum();
        let yb = b.y.sub(&p.y).signum();
        if (ya > 0) == (yb > 0) {
            continue;
        }
        // The edge crosses the horizontal line through p; the crossing is to
        // the right of p iff orient(a, b, p) has the sign of (ya - yb).
        let o = orient(a, b, &p);
        let dir = b.y.sub(&a.y).signum();
        if o * dir < 0 {
            inside = !inside;
        }
    }
    inside
}

/// Float simplicity test for arbitrary complex polygons (degenerate edges of
/// length below tolerance are dropped first).
pub fn is_simple(points: &[Complex64]) -> bool {
    let tol = 1e-9;
    let pts: Vec<Complex64> = {
        let mut out: Vec<Complex64> = Vec::new();
        for &p in points {
            if out.last().map(|&q| (p - q).norm() > tol).unwrap_or(true) {
                out.push(p);
            }
        }
        if out.len() > 1 && (out[0] - *out.last().unwrap()).norm() <= tol {
            out.pop();
        }
        out
    };
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let cross = |u: Complex64, v: Complex64| u.re * v.im - u.im * v.re;
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if (i + 1) % n == j || (j + 1) % n == i {
                continue;
            }
            let d1 = b - a;
            let d2 = d - c;
            let den = cross(d1, d2);
            if den.abs() < tol {
                if cross(d1, c - a).abs() < tol {
                    let len2 = d1.norm_sqr();
                    let t1 = ((c - a).re * d1.re + (c - a).im * d1.im) / len2;
                    let t2 = ((d - a).re * d1.re + (d - a).im * d1.im) / len2;
                    let (lo, hi) = (t1.min(t2), t1.max(t2));
                    if lo < 1.0 - 1e-9 && hi > 1e-9 {
                        return false;
                    }
                }
                continue;
            }
            let t = cross(c - a, d2) / den;
            let u = cross(c - a, d1) / den;
            if t > tol && t < 1.0 - tol && u > tol && u < 1.0 - tol {
                return false;
            }
        }
    }
    true
}

/// Boundary order of the 14-edge Tile(a, b) family: entry (is_b, p) stands
/// for displacement a xi^p (a-edges) or i b xi^p (b-edges).  This is the
/// unique chiral 8-kite boundary word whose a- and b-parts close
/// independently and that carries one collinear double a-edge.
pub const TILE_AB_WORD: [(bool, u8); 14] = [
    (false, 0),
    (false, 0),
    (false, 1),
    (true, 1),
    (true, 0),
    (false, 3),
    (false, 2),
    (true, 2),
    (true, 3),
    (false, 3),
    (false, 4),
    (true, 4),
    (true, 5),
    (false, 5),
];

/// The 14-gon Tile(a, b): the closed boundary's vertices (the repeat of the
/// start point is omitted).  Degenerate edges are kept as repeated vertices
/// when a or b vanishes.
pub fn build_tile_ab(a: Complex64, b: Complex64) -> Vec<Complex64> {
    let xi = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    let i = Complex64::new(0.0, 1.0);
    let mut pts = Vec::with_capacity(14);
    let mut z = Complex64::new(0.0, 0.0);
    for &(is_b, p) in TILE_AB_WORD.iter() {
        pts.push(z);
        let disp = if is_b { i * b } else { a } * xi.powu(p as u32);
        z += disp;
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::SQRT_3;
    use crate::zmodule::known;
    use num_rational::BigRational;

    #[test]
    fn edge_vector_examples() {
        // e_epsilon = 1 - xi + lambda.
        assert_eq!(
            edge_vector(EdgeType::Epsilon, 0),
            RingElement::from_ints(1, -1, 1, 0)
        );
        // xi^3 e_alpha = -e_alpha.
        assert_eq!(
            edge_vector(EdgeType::Alpha, 3),
            -edge_vector(EdgeType::Alpha, 0)
        );
        // eta: rotating by three steps negates.
        for m in 0..3 {
            assert_eq!(
                edge_vector(EdgeType::Eta, m + 3),
                -edge_vector(EdgeType::Eta, m)
            );
        }
    }

    #[test]
    fn all_nine_tiles_close_and_are_simple() {
        for tile in Tile::ALL {
            let t = tile_polygon(tile, 0, Handedness::Right);
            assert!(t.closes(), "{} does not close", tile.name());
            assert!(
                is_simple_exact(&t.vertices),
                "{} is not simple",
                tile.name()
            );
        }
    }

    #[test]
    fn mirrored_twice_is_original() {
        let t = tile_polygon(Tile::Gamma, 0, Handedness::Right);
        let m = tile_polygon(Tile::Gamma, 0, Handedness::Left);
        let back: Vec<RingElement> = m.vertices.iter().map(|v| v.conj()).collect();
        assert_eq!(t.vertices, back);
    }

    #[test]
    fn edge_span_is_the_edge_module_of_index_9() {
        let e = edge_module();
        let display = ZModule4::from_generators(&[
            RingElement::from_ints(1, 0, 0, 1),
            RingElement::from_ints(0, -1, 1, -1),
            RingElement::from_ints(-1, -1, 1, 1),
            RingElement::from_ints(0, 1, 2, 1),
        ]);
        assert_eq!(e, display);
        assert_eq!(
            e.index_in(&known::order_o()).unwrap(),
            num_bigint::BigInt::from(9)
        );
        // The return module sits inside E with index 9.
        assert_eq!(
            known::return_module().index_in(&e).unwrap(),
            num_bigint::BigInt::from(9)
        );
    }

    #[test]
    fn unit_rhombus_area() {
        // Rhombus spanned by 1 and xi: area sqrt(3)/2.
        let verts = vec![
            RingElement::zero(),
            RingElement::one(),
            RingElement::one() + RingElement::xi(),
            RingElement::xi(),
        ];
        let a = polygon_area_sqrt3(&verts);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            a,
            RealQuadratic::new(half, BigRational::from_integer(0.into()))
        );
    }

    #[test]
    fn area_is_rotation_invariant_and_positive() {
        for tile in Tile::ALL {
            let a0 = tile_area_sqrt3(tile);
            assert!(a0.is_positive(), "area of {} not positive", tile.name());
            let rotated: Vec<RingElement> =
                tile_vertices(tile).iter().map(|v| v.mul_xi()).collect();
            assert_eq!(polygon_area_sqrt3(&rotated), a0);
        }
    }

    #[test]
    fn tile_ab_closes_for_arbitrary_parameters() {
        let xi = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        for (a, b) in [
            (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            (Complex64::new(1.0, 0.0), Complex64::new(SQRT_3, 0.0)),
            (Complex64::new(0.3, -1.2), Complex64::new(-0.7, 0.4)),
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        ] {
            let pts = build_tile_ab(a, b);
            assert_eq!(pts.len(), 14);
            let mut total = Complex64::new(0.0, 0.0);
            for &(is_b, p) in TILE_AB_WORD.iter() {
                let disp = if is_b {
                    Complex64::new(0.0, 1.0) * b
                } else {
                    a
                } * xi.powu(p as u32);
                total += disp;
            }
            assert!(total.norm() < 1e-12);
        }
    }

    #[test]
    fn named_family_members() {
        // The Spectre: all fourteen edges of unit length, simple.
        let spectre = build_tile_ab(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(is_simple(&spectre));
        for i in 0..14 {
            let d = spectre[(i + 1) % 14] - spectre[i];
            assert!((d.norm() - 1.0).abs() < 1e-12);
        }
        // The Hat: 8 edges of length 1, 6 of length sqrt(3), simple.
        let hat = build_tile_ab(Complex64::new(1.0, 0.0), Complex64::new(SQRT_3, 0.0));
        assert!(is_simple(&hat));
        // The Chevron: only the six b-edges survive.
        let chevron = build_tile_ab(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(is_simple(&chevron));
        let distinct: Vec<Complex64> = {
            let mut out: Vec<Complex64> = Vec::new();
            for &p in &chevron {
                if out.iter().all(|&q| (p - q).norm() > 1e-9) {
                    out.push(p);
                }
            }
            out
        };
        assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn degeneracy_locus_exists() {
        // Somewhere in the family the boundary traces a figure-8; scan
        // complex ratios a/b for a witness.
        let mut found = false;
        'outer: for arg_step in 0..12 {
            for len_step in 1..12 {
                let theta = std::f64::consts::PI * (arg_step as f64) / 6.0;
                let r = 0.25 * len_step as f64;
                let a = Complex64::from_polar(r, theta);
                let pts = build_tile_ab(a, Complex64::new(1.0, 0.0));
                if !is_simple(&pts) {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found, "no self-intersecting family member found in scan");
    }

    #[test]
    fn bowtie_is_not_simple_and_hexagon_is() {
        let bowtie = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ];
        assert!(!is_simple(&bowtie));
        let hexagon: Vec<Complex64> = (0..6)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::PI / 3.0 * k as f64))
            .collect();
        assert!(is_simple(&hexagon));
    }

    #[test]
    fn exact_simplicity_detects_crossings() {
        let bow = vec![
            RingElement::zero(),
            RingElement::one() + RingElement::xi(),
            RingElement::one(),
            RingElement::xi(),
        ];
        assert!(!is_simple_exact(&bow));
    }
}
