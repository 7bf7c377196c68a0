//! Rank <= 4 Z-submodules of the rational span of (1, xi, lambda, lambda xi),
//! in canonical Hermite form, with index, ideal and duality computations.
//!
//! These house the concrete modules of the construction: the order
//! O = Z[xi, lambda], the edge module E, the return module L, the maximal
//! order O_K, and their duals with respect to the Minkowski trace form.

use crate::intmatrix::IntMatrix;
use crate::ring::{trace_form, RingElement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("module is rank-deficient (rank {0}), operation needs full rank 4")]
    RankDeficient(usize),
    #[error("not a submodule: change of basis is not integral")]
    NotASubmodule,
    #[error("modules span different subspaces")]
    SpanMismatch,
}

/// A finitely generated Z-submodule of Q(1, xi, lambda, lambda xi), stored
/// as `basis` rows of integer coordinates over the common denominator `den`.
/// The basis is in canonical row Hermite form with the denominator reduced,
/// so equal modules have identical representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZModule4 {
    pub den: BigInt,
    pub basis: IntMatrix,
}

impl ZModule4 {
    pub fn from_generators(gens: &[RingElement]) -> Self {
        // Common denominator across all generators.
        let mut den = BigInt::one();
        for g in gens {
            for c in &g.coords {
                den = den.lcm(c.denom());
            }
        }
        let mut m = IntMatrix::zero(gens.len(), 4);
        for (i, g) in gens.iter().enumerate() {
            for j in 0..4 {
                let scaled = &g.coords[j] * BigRational::from_integer(den.clone());
                debug_assert!(scaled.denom().is_one());
                m[(i, j)] = scaled.to_integer();
            }
        }
        Self::from_scaled(den, m)
    }

    fn from_scaled(den: BigInt, m: IntMatrix) -> Self {
        let h = m.hnf();
        let rank = (0..h.rows)
            .filter(|&i| (0..4).any(|j| !h[(i, j)].is_zero()))
            .count();
        let mut basis = IntMatrix::zero(rank, 4);
        for i in 0..rank {
            for j in 0..4 {
                basis[(i, j)] = h[(i, j)].clone();
            }
        }
        // Reduce the denominator against the content of the basis.
        let mut content = den.clone();
        for i in 0..rank {
            for j in 0..4 {
                content = content.gcd(&basis[(i, j)]);
            }
        }
        if content > BigInt::one() {
            for i in 0..rank {
                for j in 0..4 {
                    let v = &basis[(i, j)] / &content;
                    basis[(i, j)] = v;
                }
            }
        }
        ZModule4 {
            den: den / content,
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis_elements(&self) -> Vec<RingElement> {
        let d = BigRational::from_integer(self.den.clone());
        (0..self.basis.rows)
            .map(|i| {
                RingElement::new([
                    BigRational::from_integer(self.basis[(i, 0)].clone()) / &d,
                    BigRational::from_integer(self.basis[(i, 1)].clone()) / &d,
                    BigRational::from_integer(self.basis[(i, 2)].clone()) / &d,
                    BigRational::from_integer(self.basis[(i, 3)].clone()) / &d,
                ])
            })
            .collect()
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        // den * x must be integral and an integer combination of the basis.
        let d = BigRational::from_integer(self.den.clone());
        let mut b = Vec::with_capacity(4);
        for j in 0..4 {
            let v = &x.coords[j] * &d;
            if !v.denom().is_one() {
                return false;
            }
            b.push(v.to_integer());
        }
        self.basis.solve_left(&b).is_some()
    }

    pub fn is_submodule_of(&self, other: &ZModule4) -> bool {
        self.basis_elements().iter().all(|g| other.contains(g))
    }

    /// Index [other : self] for self a finite-index submodule of other.
    pub fn index_in(&self, other: &ZModule4) -> Result<BigInt, ModuleError> {
        if self.rank() != other.rank() {
            return Err(ModuleError::SpanMismatch);
        }
        let r = self.rank();
        // Express each basis row of self over the basis of other; the change
        // of basis must be integral, and the index is |det|.
        let mut x = IntMatrix::zero(r, r);
        let d_other = BigRational::from_integer(other.den.clone());
        for (i, g) in self.basis_elements().iter().enumerate() {
            let mut b = Vec::with_capacity(4);
            for j in 0..4 {
                let v = &g.coords[j] * &d_other;
                if !v.denom().is_one() {
                    return Err(ModuleError::NotASubmodule);
                }
                b.push(v.to_integer());
            }
            let sol = other
                .basis
                .solve_left(&b)
                .ok_or(ModuleError::NotASubmodule)?;
            for (j, s) in sol.into_iter().enumerate() {
                x[(i, j)] = s;
            }
        }
        let det = x.det().abs();
        if det.is_zero() {
            return Err(ModuleError::SpanMismatch);
        }
        Ok(det)
    }

    /// Image of the module under an additive map on elements.
    pub fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> ZModule4 {
        let gens: Vec<RingElement> = self.basis_elements().iter().map(|g| f(g)).collect();
        ZModule4::from_generators(&gens)
    }

    /// The module z * self.
    pub fn scale(&self, z: &RingElement) -> ZModule4 {
        self.map(|g| g * z)
    }

    /// Tests xi * M <= M and lambda * M <= M, i.e. M is stable under the
    /// whole order (an ideal of O when M sits inside O up to scale).
    pub fn is_ideal(&self) -> bool {
        let xi = RingElement::xi();
        let lam = RingElement::lambda();
        self.basis_elements()
            .iter()
            .all(|g| self.contains(&(g * &xi)) && self.contains(&(g * &lam)))
    }

    /// Dual module with respect to the trace form
    /// B(x, y) = x.y + (x.y)', the standard inner product of Minkowski lifts.
    pub fn dual(&self) -> Result<ZModule4, ModuleError> {
        if self.rank() != 4 {
            return Err(ModuleError::RankDeficient(self.rank()));
        }
        let b = self.basis_elements();
        // Gram matrix of the basis under the trace form.
        let mut gram = vec![vec![BigRational::zero(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                gram[i][j] = trace_form(&b[i], &b[j]);
            }
        }
        let inv = invert4(&gram).expect("basis of a full-rank module has invertible Gram matrix");
        // Dual basis rows: d_k = sum_j inv[k][j] * b_j.
        let gens: Vec<RingElement> = (0..4)
            .map(|k| {
                let mut acc = RingElement::zero();
                for j in 0..4 {
                    acc += &b[j].scale(&inv[k][j]);
                }
                acc
            })
            .collect();
        Ok(ZModule4::from_generators(&gens))
    }
}

/// Inverse of a 4x4 rational matrix by Gauss-Jordan; None if singular.
fn invert4(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = 4;
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let av = &a[col][j] * &f;
                a[i][j] -= av;
                let iv = &inv[col][j] * &f;
                inv[i][j] -= iv;
            }
        }
    }
    Some(inv)
}

/// The concrete modules of the construction.
pub mod known {
    use super::*;
    use crate::ring::RingElement;

    /// The order O = Z[xi, lambda] with basis (1, xi, lambda, lambda xi).
    pub fn order_o() -> ZModule4 {
        ZModule4::from_generators(&[
            RingElement::from_ints(1, 0, 0, 0),
            RingElement::from_ints(0, 1, 0, 0),
            RingElement::from_ints(0, 0, 1, 0),
            RingElement::from_ints(0, 0, 0, 1),
        ])
    }

    /// alpha = (1 + xi)(lambda - 4)/3 = sqrt(5) e^{i pi/6}, the primitive
    /// element with O_K = <1, alpha, alpha^2/5, alpha^3/5>.
    pub fn alpha() -> RingElement {
        RingElement::from_ints_over([-4, -4, 1, 1], 3)
    }

    /// i sqrt(3) = 2 xi - 1.
    pub fn i_sqrt3() -> RingElement {
        RingElement::from_ints(-1, 2, 0, 0)
    }

    /// i sqrt(5) = (2 xi - 1)(lambda - 4)/3.
    pub fn i_sqrt5() -> RingElement {
        RingElement::from_ints_over([4, -8, -1, 2], 3)
    }

    /// The maximal order O_K = <1, alpha, alpha^2/5, alpha^3/5>.
    pub fn maximal_order() -> ZModule4 {
        let a = alpha();
        let a2 = &a * &a;
        let a3 = &a2 * &a;
        let fifth = BigRational::new(BigInt::one(), BigInt::from(5));
        ZModule4::from_generators(&[
            RingElement::one(),
            a,
            a2.scale(&fifth),
            a3.scale(&fifth),
        ])
    }

    /// The return module L via its straightforward Z-basis.
    pub fn return_module() -> ZModule4 {
        ZModule4::from_generators(&[
            RingElement::from_ints(-1, -1, 1, -2),
            RingElement::from_ints(2, -1, 1, 1),
            RingElement::from_ints(2, 2, 1, -2),
            RingElement::from_ints(-2, 1, 2, 2),
        ])
    }

    /// L again, from the triangular generating set
    /// (1 + xi + 2 lam + 5 lam xi, 3 xi + 6 lam xi, 3 lam + 3 lam xi, 9 lam xi).
    pub fn return_module_triangular() -> ZModule4 {
        ZModule4::from_generators(&[
            RingElement::from_ints(1, 1, 2, 5),
            RingElement::from_ints(0, 3, 0, 6),
            RingElement::from_ints(0, 0, 3, 3),
            RingElement::from_ints(0, 0, 0, 9),
        ])
    }

    /// The reduced generators g1..g4 of L (with g2 = xi g1).
    pub fn return_module_generators() -> [RingElement; 4] {
        [
            RingElement::from_ints(-1, -1, 1, -2),
            RingElement::from_ints(1, -2, 2, -1),
            RingElement::from_ints(-2, 1, 2, 2),
            RingElement::from_ints(-2, -2, -1, 2),
        ]
    }

    /// The O-module generated by the given elements and their unit translates,
    /// i.e. the ideal (g_1, ..., g_n) of O.
    pub fn ideal_generated_by(gens: &[RingElement]) -> ZModule4 {
        let mut all = Vec::new();
        for g in gens {
            all.push(g.clone());
            all.push(g.mul_xi());
            all.push(g * &RingElement::lambda());
            all.push(g.mul_xi() * RingElement::lambda());
        }
        ZModule4::from_generators(&all)
    }
}

#[cfg(test)]
mod tests {
    use super::known::*;
    use super::*;
    use crate::ring::RingElement;

    #[test]
    fn canonical_form_is_unique() {
        let a = ZModule4::from_generators(&[
            RingElement::from_ints(2, 0, 0, 0),
            RingElement::from_ints(1, 1, 0, 0),
            RingElement::from_ints(0, 0, 1, 0),
        ]);
        let b = ZModule4::from_generators(&[
            RingElement::from_ints(1, 1, 0, 0),
            RingElement::from_ints(1, -1, 0, 0),
            RingElement::from_ints(0, 0, 1, 0),
            RingElement::from_ints(3, 1, 1, 0),
        ]);
        assert_eq!(a, b);
    }

    #[test]
    fn alpha_is_sqrt5_times_twelfth_root() {
        let a = alpha();
        let e = a.embed();
        let expect =
            num_complex::Complex64::from_polar(5.0_f64.sqrt(), std::f64::consts::PI / 6.0);
        assert!((e - expect).norm() < 1e-12);
        // alpha^2 = 5 xi, so alpha^2/5 lies in Z[xi].
        assert_eq!(&a * &a, RingElement::from_ints(0, 5, 0, 0));
    }

    #[test]
    fn i_sqrt_constants() {
        assert!(
            (i_sqrt3().embed() - num_complex::Complex64::new(0.0, 3.0_f64.sqrt())).norm() < 1e-12
        );
        assert!(
            (i_sqrt5().embed() - num_complex::Complex64::new(0.0, 5.0_f64.sqrt())).norm() < 1e-12
        );
    }

    #[test]
    fn return_module_presentations_agree() {
        assert_eq!(return_module(), return_module_triangular());
        let gens = return_module_generators();
        assert_eq!(ZModule4::from_generators(&gens), return_module());
    }

    #[test]
    fn g2_is_xi_g1_not_the_plus_variant() {
        let g1 = RingElement::from_ints(-1, -1, 1, -2);
        assert_eq!(g1.mul_xi(), RingElement::from_ints(1, -2, 2, -1));
        // The sign variant 1 - 2 xi + 2 lam + lam xi is not even in L.
        let variant = RingElement::from_ints(1, -2, 2, 1);
        assert!(!return_module().contains(&variant));
        assert!(return_module().contains(&g1.mul_xi()));
    }

    #[test]
    fn index_of_l_in_o() {
        assert_eq!(
            return_module().index_in(&order_o()).unwrap(),
            BigInt::from(81)
        );
    }

    #[test]
    fn l_is_an_ideal_generated_by_g1_g3() {
        let l = return_module();
        assert!(l.is_ideal());
        let g = return_module_generators();
        let two_gen = ideal_generated_by(&[g[0].clone(), g[2].clone()]);
        assert_eq!(two_gen, l);
    }

    #[test]
    fn alternative_alpha_generators_for_l() {
        // L = (3 xi + 3 alpha + 6, 3 alpha + 3 alpha xi) as an O-ideal.
        let a = alpha();
        let g_a = RingElement::from_ints(6, 3, 0, 0) + a.scale_int(3);
        let g_b = a.scale_int(3) + a.scale_int(3).mul_xi();
        assert_eq!(ideal_generated_by(&[g_a, g_b]), return_module());
    }

    #[test]
    fn maximal_order_chain() {
        let o = order_o();
        let ok = maximal_order();
        assert_eq!(o.index_in(&ok).unwrap(), BigInt::from(3));
        let scaled = ok.scale(&i_sqrt3());
        assert_eq!(scaled.index_in(&o).unwrap(), BigInt::from(3));
        // O_K is closed under multiplication by alpha.
        let a = alpha();
        assert!(ok.basis_elements().iter().all(|g| ok.contains(&(g * &a))));
    }

    #[test]
    fn duals_and_index_chain() {
        let o = order_o();
        let ok = maximal_order();
        let l = return_module();

        let o_dual = o.dual().unwrap();
        let fifteenth = BigRational::new(BigInt::one(), BigInt::from(15));
        assert_eq!(o_dual, o.scale(&i_sqrt5().scale(&fifteenth)));

        let l_dual = l.dual().unwrap();
        let w = BigRational::new(BigInt::one(), BigInt::from(135));
        assert_eq!(l_dual, l.scale(&i_sqrt5().scale(&w)));

        // Dual is an involution.
        assert_eq!(l_dual.dual().unwrap(), l);

        // Chain L c O c O_K c O_K* c O* c L* with indices 81, 3, 225, 3, 81.
        let ok_dual = ok.dual().unwrap();
        assert_eq!(l.index_in(&o).unwrap(), BigInt::from(81));
        assert_eq!(o.index_in(&ok).unwrap(), BigInt::from(3));
        assert_eq!(ok.index_in(&ok_dual).unwrap(), BigInt::from(225));
        assert_eq!(ok_dual.index_in(&o_dual).unwrap(), BigInt::from(3));
        assert_eq!(o_dual.index_in(&l_dual).unwrap(), BigInt::from(81));
    }

    #[test]
    fn index_is_multiplicative_along_chains() {
        let o = order_o();
        let l = return_module();
        let two_l = l.map(|g| g.scale_int(2));
        let i1 = two_l.index_in(&l).unwrap();
        let i2 = l.index_in(&o).unwrap();
        assert_eq!(i1 * i2, two_l.index_in(&o).unwrap());
    }

    #[test]
    fn dual_of_rank_deficient_module_errors() {
        let m = ZModule4::from_generators(&[RingElement::one()]);
        assert_eq!(m.dual().unwrap_err(), ModuleError::RankDeficient(1));
    }

    #[test]
    fn contains_rejects_non_members() {
        let l = return_module();
        assert!(!l.contains(&RingElement::one()));
        assert!(l.contains(&RingElement::zero()));
    }
}
