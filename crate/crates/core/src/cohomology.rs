//! Cohomology of the meta-tile complex, per representation and over Z.
//!
//! Cochains are row vectors acted on from the right: H^1 at representation k
//! is ker(. d2) / im(. d1) on edge rows over Q(xi^k), and H^2 is the face
//! space modulo the rows of d2.  The substitution acts through two half
//! steps, M* followed by its reflection, and the Cech groups of the tiling
//! space are the direct limits under that action, computed as eventual
//! ranks (over C) and as stabilized quotient lattices (over Z).

use crate::apdata;
use crate::groupring::{
    divide_by_quadratic, zero_eigenvalue_multiplicity, EvaluatedMatrix, QuadExt,
};
use crate::intmatrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::One;

/// Everything computed for one representation r = xi^k.
pub struct RepComputation {
    pub k: u8,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub rank_d1: usize,
    pub rank_d2: usize,
    pub h1_dim: usize,
    pub h2_dim: usize,
    /// Induced two-round substitution on the H^1 quotient basis.
    pub h1_map: EvaluatedMatrix,
    /// Induced two-round substitution on the H^2 quotient basis.
    pub h2_map: EvaluatedMatrix,
    pub h1_limit_dim: usize,
    pub h2_limit_dim: usize,
}

fn stack(rows: &[Vec<QuadExt>], k: u8, cols: usize) -> EvaluatedMatrix {
    let mut m = EvaluatedMatrix::zero(k, rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m
}

fn matrix_rows(m: &EvaluatedMatrix) -> Vec<Vec<QuadExt>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
        .collect()
}

fn row_times(v: &[QuadExt], m: &EvaluatedMatrix) -> Vec<QuadExt> {
    let k = m.k;
    let mut out = vec![QuadExt::zero(k); m.cols];
    for (t, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for j in 0..m.cols {
            let w = out[j].add(&c.mul(m.get(t, j)));
            out[j] = w;
        }
    }
    out
}

/// A quotient V / W of row spaces presented by explicit representative rows.
struct Quotient {
    k: u8,
    dim_ambient: usize,
    /// Representative rows spanning the quotient.
    reps: Vec<Vec<QuadExt>>,
    /// Rows spanning the subspace being quotiented out.
    modded: Vec<Vec<QuadExt>>,
}

impl Quotient {
    /// Expresses v in the quotient basis; panics if v is outside
    /// span(reps) + span(modded).
    fn coords(&self, v: &[QuadExt]) -> Vec<QuadExt> {
        let mut rows = self.reps.clone();
        rows.extend(self.modded.iter().cloned());
        let m = stack(&rows, self.k, self.dim_ambient);
        let x = m
            .solve_left(v)
            .expect("vector not in quotient presentation span");
        x[..self.reps.len()].to_vec()
    }

    /// Induced matrix of the right action v -> v * op, which must preserve
    /// the modded-out subspace for the quotient action to be well defined.
    fn induced(&self, op: &EvaluatedMatrix) -> EvaluatedMatrix {
        if !self.modded.is_empty() {
            let modded = stack(&self.modded, self.k, self.dim_ambient);
            for w in &self.modded {
                let img = row_times(w, op);
                assert!(
                    modded.solve_left(&img).is_some(),
                    "substitution does not preserve the coboundary subspace"
                );
            }
        }
        let n = self.reps.len();
        let mut out = EvaluatedMatrix::zero(self.k, n, n);
        for (i, b) in self.reps.iter().enumerate() {
            let img = row_times(b, op);
            let coords = self.coords(&img);
            for (j, c) in coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }
}

/// Representatives of rows of `space` that are independent modulo
/// span(modded).
fn quotient_reps(
    space: &[Vec<QuadExt>],
    modded: &[Vec<QuadExt>],
    k: u8,
    cols: usize,
) -> Vec<Vec<QuadExt>> {
    let mut acc = modded.to_vec();
    let mut reps = Vec::new();
    let mut current_rank = stack(&acc, k, cols).rank();
    for v in space {
        let mut trial = acc.clone();
        trial.push(v.clone());
        let r = stack(&trial, k, cols).rank();
        if r > current_rank {
            reps.push(v.clone());
            acc = trial;
            current_rank = r;
        }
    }
    reps
}

/// Computes everything for one representation.
pub fn rep_computation(k: u8) -> RepComputation {
    let d1 = apdata::partial1().evaluate(k);
    let d2 = apdata::partial2().evaluate(k);
    let m1s = apdata::m1_star().evaluate(k);
    let m2s = apdata::m2_star().evaluate(k);
    // Two rounds of substitution: M* then its reflection (complex conjugate).
    let m1_hat = m1s.mul(&m1s.conj_matrix());
    let m2_hat = m2s.mul(&m2s.conj_matrix());

    let rank_d1 = d1.rank();
    let rank_d2 = d2.rank();
    let edges = d1.cols;
    let vertices = d1.rows;
    let faces = d2.cols;

    // H^1 = ker(. d2) / im(. d1) on edge rows.
    let kernel = matrix_rows(&d2.left_kernel());
    let image = matrix_rows(&d1);
    let h1_reps = quotient_reps(&kernel, &image, k, edges);
    let h1_dim = h1_reps.len();
    let h1_quot = Quotient {
        k,
        dim_ambient: edges,
        reps: h1_reps,
        modded: image,
    };
    let h1_map = h1_quot.induced(&m1_hat);

    // H^2 = face rows / im(. d2).
    let d2_rows = matrix_rows(&d2);
    let unit_faces: Vec<Vec<QuadExt>> = (0..faces)
        .map(|j| {
            let mut v = vec![QuadExt::zero(k); faces];
            v[j] = QuadExt::one(k);
            v
        })
        .collect();
    let h2_reps = quotient_reps(&unit_faces, &d2_rows, k, faces);
    let h2_dim = h2_reps.len();
    let h2_quot = Quotient {
        k,
        dim_ambient: faces,
        reps: h2_reps,
        modded: d2_rows,
    };
    let h2_map = h2_quot.induced(&m2_hat);

    let h1_limit_dim = if h1_dim == 0 { 0 } else { h1_map.eventual_rank() };
    let h2_limit_dim = if h2_dim == 0 { 0 } else { h2_map.eventual_rank() };

    RepComputation {
        k,
        vertices,
        edges,
        faces,
        rank_d1,
        rank_d2,
        h1_dim,
        h2_dim,
        h1_map,
        h2_map,
        h1_limit_dim,
        h2_limit_dim,
    }
}

pub fn h1_dim(k: u8) -> usize {
    rep_computation(k).h1_dim
}

pub fn h2_dim(k: u8) -> usize {
    rep_computation(k).h2_dim
}

/// The per-representation table plus the Cech totals.
pub struct CechReport {
    pub reps: Vec<RepComputation>,
    pub h1_total: usize,
    pub h2_total: usize,
    pub h1_ap_total: usize,
    pub h2_ap_total: usize,
}

pub fn cech_report() -> CechReport {
    let reps: Vec<RepComputation> = (0..6).map(rep_computation).collect();
    let h1_total = reps.iter().map(|r| r.h1_limit_dim).sum();
    let h2_total = reps.iter().map(|r| r.h2_limit_dim).sum();
    let h1_ap_total = reps.iter().map(|r| r.h1_dim).sum();
    let h2_ap_total = reps.iter().map(|r| r.h2_dim).sum();
    CechReport {
        reps,
        h1_total,
        h2_total,
        h1_ap_total,
        h2_ap_total,
    }
}

impl CechReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        s.push_str("Cech cohomology of the tiling space, one representation per block\n");
        for r in &self.reps {
            s.push_str(&format!(
                "r = xi^{}: cells (v, e, f) = ({}, {}, {}); rank d1 = {}, rank d2 = {}\n",
                r.k, r.vertices, r.edges, r.faces, r.rank_d1, r.rank_d2
            ));
            s.push_str(&format!(
                "  H1 = C^{} (limit C^{}), H2 = C^{} (limit C^{})\n",
                r.h1_dim, r.h1_limit_dim, r.h2_dim, r.h2_limit_dim
            ));
        }
        s.push_str(&format!(
            "totals: H1(complex) = C^{}, H2(complex) = C^{}\n",
            self.h1_ap_total, self.h2_ap_total
        ));
        s.push_str(&format!(
            "Cech H1 = C^{}, Cech H2 = C^{}\n",
            self.h1_total, self.h2_total
        ));
        s
    }
}

/// One integral quotient H = (ambient lattice) / rowlattice(sub), together
/// with the induced endomorphism and its stabilized direct limit.
pub struct IntegralGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub limit_rank: usize,
    /// True when the induced map is unimodular on the stable sublattice and
    /// the invariant factors of iterated images stabilized (all 1), so the
    /// direct limit is the plain free group of `limit_rank`.
    pub stable: bool,
}

/// Integral cohomology report: both groups with their limits.
pub struct IntegralReport {
    pub h1: IntegralGroup,
    pub h2: IntegralGroup,
}

fn int_row_times(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    let zero = BigInt::from(0);
    let mut out = vec![BigInt::from(0); m.cols];
    for (t, c) in v.iter().enumerate() {
        if c == &zero {
            continue;
        }
        for j in 0..m.cols {
            let p = c * &m[(t, j)];
            out[j] += p;
        }
    }
    out
}

/// Quotient-lattice computation: the ambient lattice is spanned by the rows
/// of `ambient_basis` (a saturated lattice in the big coordinate space), the
/// subgroup by the rows of `sub_rows`, and `action` acts on the big space by
/// right multiplication.
fn integral_group(ambient_basis: &IntMatrix, sub_rows: &IntMatrix, action: &IntMatrix) -> IntegralGroup {
    let n = ambient_basis.rows;
    // Express sub rows in ambient coordinates.
    let mut a = IntMatrix::zero(sub_rows.rows, n);
    for i in 0..sub_rows.rows {
        let sol = ambient_basis
            .solve_left(sub_rows.row(i))
            .expect("coboundary row must lie in the kernel lattice");
        for (j, v) in sol.into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    // Torsion and rank of Z^n / rowlat(a).
    let factors = a.snf_invariant_factors();
    let r = factors.len();
    let torsion: Vec<BigInt> = factors.into_iter().filter(|f| f > &BigInt::one()).collect();
    let free_rank = n - r;

    // Induced action in ambient coordinates.
    let mut b = IntMatrix::zero(n, n);
    for i in 0..n {
        let img = int_row_times(ambient_basis.row(i), action);
        let sol = ambient_basis
            .solve_left(&img)
            .expect("substitution must preserve the kernel lattice");
        for (j, v) in sol.into_iter().enumerate() {
            b[(i, j)] = v;
        }
    }
    // The subgroup must be preserved for the quotient action to make sense.
    for i in 0..a.rows {
        let img = int_row_times(a.row(i), &b);
        assert!(
            a.solve_left(&img).is_some(),
            "substitution does not preserve the coboundary lattice over Z"
        );
    }

    // Free-part coordinates: integer functionals vanishing on rowlat(a).
    // The columns of phi are a saturated lattice, so y -> y * phi maps onto
    // Z^{free_rank} with kernel the saturation of rowlat(a).
    let phi = a.right_kernel().transpose(); // n x free_rank
    debug_assert_eq!(phi.cols, free_rank);
    // Induced map f on the free quotient: b * phi = phi * f.
    let bphi = b.mul(&phi);
    let f = {
        let phi_t = phi.transpose();
        let bphi_t = bphi.transpose();
        let mut ft = IntMatrix::zero(free_rank, free_rank);
        for i in 0..free_rank {
            let sol = phi_t
                .solve_left(bphi_t.row(i))
                .expect("free quotient action must be integral");
            for (j, v) in sol.into_iter().enumerate() {
                ft[(i, j)] = v;
            }
        }
        ft.transpose()
    };

    // Direct limit: eventual rank of f, then invariant-factor stability of
    // the action restricted to the saturated stable sublattice.
    let mut power = f.clone();
    let mut rank = power.rank();
    for _ in 0..free_rank + 2 {
        let next = power.mul(&f);
        let r2 = next.rank();
        if r2 == rank {
            break;
        }
        power = next;
        rank = r2;
    }
    let limit_rank = rank;
    // Saturated row span of the stabilized power: vectors orthogonal to its
    // right kernel.
    let w_basis = power.right_kernel().transpose().left_kernel();
    let wf = w_basis.mul(&f);
    let mut g = IntMatrix::zero(w_basis.rows, w_basis.rows);
    for i in 0..w_basis.rows {
        let sol = w_basis
            .solve_left(wf.row(i))
            .expect("stable sublattice must be invariant");
        for (j, v) in sol.into_iter().enumerate() {
            g[(i, j)] = v;
        }
    }
    let all_one = |m: &IntMatrix| {
        m.snf_invariant_factors()
            .iter()
            .all(|d| d == &BigInt::one())
    };
    let g2 = g.mul(&g);
    let g3 = g2.mul(&g);
    let stable = if limit_rank == 0 {
        true
    } else {
        all_one(&g) && all_one(&g2) && all_one(&g3)
    };

    IntegralGroup {
        free_rank,
        torsion,
        limit_rank,
        stable,
    }
}

/// Integral Cech cohomology via the expanded integer matrices.
pub fn integral_report() -> IntegralReport {
    let d1 = apdata::partial1().expand_integer();
    let d2 = apdata::partial2().expand_integer();
    let m1_hat = apdata::m1_star()
        .expand_integer()
        .mul(&apdata::m1_star().expand_integer_conj());
    let m2_hat = apdata::m2_star()
        .expand_integer()
        .mul(&apdata::m2_star().expand_integer_conj());

    // H^1: kernel of (. d2) on Z^45 modulo the rows of d1.
    let kernel = d2.left_kernel();
    let h1 = integral_group(&kernel, &d1, &m1_hat);

    // H^2: Z^54 modulo the rows of d2.
    let h2 = integral_group(&IntMatrix::identity(54), &d2, &m2_hat);

    IntegralReport { h1, h2 }
}

impl IntegralReport {
    pub fn render_text(&self) -> String {
        let fmt = |g: &IntegralGroup, name: &str| {
            let torsion = if g.torsion.is_empty() {
                "no torsion".to_string()
            } else {
                format!("torsion {:?}", g.torsion)
            };
            format!(
                "{name}: complex rank {} ({}), direct limit rank {} ({})\n",
                g.free_rank,
                torsion,
                g.limit_rank,
                if g.stable {
                    "stabilized, free"
                } else {
                    "NOT stabilized: inconclusive"
                }
            )
        };
        let mut s = String::from("Integral Cech cohomology\n");
        s.push_str(&fmt(&self.h1, "H1"));
        s.push_str(&fmt(&self.h2, "H2"));
        s
    }
}

/// Certifies the eigenvalue content of an induced map: divides the
/// characteristic polynomial by t^2 + c1 t + c0 the requested number of
/// times, checks no further factor divides, and that all other eigenvalues
/// vanish.
pub fn certify_quadratic_eigenvalues(
    map: &EvaluatedMatrix,
    c1: i64,
    c0: i64,
    multiplicity: usize,
) -> bool {
    let mut poly = map.charpoly();
    for _ in 0..multiplicity {
        match divide_by_quadratic(&poly, c1, c0) {
            Some(q) => poly = q,
            None => return false,
        }
    }
    if poly.len() >= 3 && divide_by_quadratic(&poly, c1, c0).is_some() {
        return false;
    }
    // What remains must be a power of t.
    let zeros = zero_eigenvalue_multiplicity(&poly);
    zeros + 1 == poly.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_per_representation() {
        let expect_d1 = [2, 1, 1, 3, 1, 1];
        let expect_d2 = [5, 5, 6, 5, 6, 5];
        for k in 0..6u8 {
            let r = rep_computation(k);
            assert_eq!(r.rank_d1, expect_d1[k as usize], "rank d1 at k = {k}");
            assert_eq!(r.rank_d2, expect_d2[k as usize], "rank d2 at k = {k}");
        }
    }

    #[test]
    fn h_dimensions_per_representation() {
        let expect_h1 = [0, 2, 0, 0, 0, 2];
        let expect_h2 = [4, 4, 3, 4, 3, 4];
        for k in 0..6u8 {
            let r = rep_computation(k);
            assert_eq!(r.h1_dim, expect_h1[k as usize], "h1 at k = {k}");
            assert_eq!(r.h2_dim, expect_h2[k as usize], "h2 at k = {k}");
        }
    }

    #[test]
    fn direct_limits_per_representation() {
        let expect_h1 = [0, 2, 0, 0, 0, 2];
        let expect_h2 = [2, 2, 1, 2, 1, 2];
        for k in 0..6u8 {
            let r = rep_computation(k);
            assert_eq!(r.h1_limit_dim, expect_h1[k as usize], "h1 limit at k = {k}");
            assert_eq!(r.h2_limit_dim, expect_h2[k as usize], "h2 limit at k = {k}");
        }
    }

    #[test]
    fn totals() {
        let report = cech_report();
        assert_eq!(report.h1_total, 4);
        assert_eq!(report.h2_total, 10);
        // The complex itself carries C^22 in degree two.
        assert_eq!(report.h2_ap_total, 22);
        assert_eq!(report.h1_ap_total, 4);
    }

    #[test]
    fn h1_substitution_eigenvalues_at_fundamental_reps() {
        for k in [1u8, 5] {
            let r = rep_computation(k);
            assert_eq!(r.h1_map.rows, 2);
            // char poly t^2 - 8t + 1: eigenvalues 4 +- sqrt(15), multiplicity 1.
            assert!(certify_quadratic_eigenvalues(&r.h1_map, -8, 1, 1));
        }
    }

    #[test]
    fn h2_substitution_eigenvalues() {
        // k = 0: rank 2 with nonzero eigenvalues (4 +- sqrt(15))^2,
        // the roots of t^2 - 62t + 1.
        let r0 = rep_computation(0);
        assert_eq!(r0.h2_map.rank(), 2);
        assert!(certify_quadratic_eigenvalues(&r0.h2_map, -62, 1, 1));
        // k = 1: eigenvalues 4 +- sqrt(15) and 0, 0.
        let r1 = rep_computation(1);
        assert!(certify_quadratic_eigenvalues(&r1.h2_map, -8, 1, 1));
        // k = 2: 3x3 of rank 1, only nonzero eigenvalue 1: poly t^2 (t - 1).
        let r2 = rep_computation(2);
        assert_eq!(r2.h2_map.rank(), 1);
        let cp = r2.h2_map.charpoly();
        assert_eq!(zero_eigenvalue_multiplicity(&cp), 2);
        assert_eq!(cp[2], QuadExt::from_int(2, -1));
        assert_eq!(cp[3], QuadExt::from_int(2, 1));
        // k = 3: double nonzero eigenvalue 1: divisible by (t - 1)^2 = t^2 - 2t + 1.
        let r3 = rep_computation(3);
        assert_eq!(r3.h2_map.rank(), 2);
        assert!(certify_quadratic_eigenvalues(&r3.h2_map, -2, 1, 1));
    }

    #[test]
    fn integral_cohomology_is_free_of_ranks_4_and_10() {
        let rep = integral_report();
        assert_eq!(rep.h1.limit_rank, 4);
        assert_eq!(rep.h2.limit_rank, 10);
        assert!(rep.h1.torsion.is_empty());
        assert!(rep.h2.torsion.is_empty());
        assert!(rep.h1.stable);
        assert!(rep.h2.stable);
        // Complex-level integral ranks match the complex dimensions over C.
        assert_eq!(rep.h1.free_rank, 4);
        assert_eq!(rep.h2.free_rank, 22);
    }
}
