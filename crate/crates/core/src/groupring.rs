//! Matrices over the group ring Z[r]/(r^6 - 1) and their per-representation
//! evaluations.
//!
//! The boundary and substitution matrices of the Anderson-Putnam complex have
//! entries that are polynomials in the rotation r.  Evaluating r -> xi^k turns
//! them into exact matrices over the 2-dimensional Q-algebra Q(xi^k); expanding
//! r into permutation blocks turns them into plain integer matrices.  Cell
//! classes with extra symmetry get smaller blocks: the non-directional edge eta
//! satisfies r^3 eta = -eta (negacyclic 3-block) and the vertices p, q satisfy
//! r^2 p = p (2-block swap).

use crate::intmatrix::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A polynomial in r with integer coefficients, reduced mod r^6 = 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Poly6 {
    pub c: [i64; 6],
}

impl Poly6 {
    pub const ZERO: Poly6 = Poly6 { c: [0; 6] };

    pub fn zero() -> Self {
        Self::ZERO
    }

    pub fn constant(n: i64) -> Self {
        let mut c = [0i64; 6];
        c[0] = n;
        Poly6 { c }
    }

    /// n * r^m
    pub fn monomial(n: i64, m: usize) -> Self {
        let mut c = [0i64; 6];
        c[m % 6] += n;
        Poly6 { c }
    }

    /// Builds from a list of (coefficient, power) monomials.
    pub fn from_monomials(terms: &[(i64, usize)]) -> Self {
        let mut c = [0i64; 6];
        for &(n, m) in terms {
            c[m % 6] += n;
        }
        Poly6 { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Poly6) -> Poly6 {
        let mut c = [0i64; 6];
        for i in 0..6 {
            c[i] = self.c[i] + o.c[i];
        }
        Poly6 { c }
    }

    pub fn neg(&self) -> Poly6 {
        let mut c = [0i64; 6];
        for i in 0..6 {
            c[i] = -self.c[i];
        }
        Poly6 { c }
    }

    pub fn mul(&self, o: &Poly6) -> Poly6 {
        let mut c = [0i64; 6];
        for i in 0..6 {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..6 {
                c[(i + j) % 6] += self.c[i] * o.c[j];
            }
        }
        Poly6 { c }
    }

    /// r -> r^{-1}, the reflection twist.
    pub fn conj(&self) -> Poly6 {
        let mut c = [0i64; 6];
        for i in 0..6 {
            c[(6 - i) % 6] += self.c[i];
        }
        Poly6 { c }
    }

    /// Canonical representative modulo r^3 + 1 (for eta-indexed entries):
    /// coefficients folded onto powers 0..2 with alternating sign.
    pub fn reduce_negacyclic(&self) -> Poly6 {
        let mut c = [0i64; 6];
        for i in 0..6 {
            if i < 3 {
                c[i] += self.c[i];
            } else {
                c[i - 3] -= self.c[i];
            }
        }
        Poly6 { c }
    }

    /// Evaluation at r = xi^k.
    pub fn eval(&self, k: u8) -> QuadExt {
        let mut acc = QuadExt::zero(k);
        for (i, &n) in self.c.iter().enumerate() {
            if n != 0 {
                acc = acc.add(&QuadExt::power_of_generator(k, i).scale_int(n));
            }
        }
        acc
    }
}

/// An exact element a + b * xi^k of the representation field Q(xi^k).
///
/// The minimal polynomial depends on k: x^2 = x - 1 for k = 1, 5 and
/// x^2 = -x - 1 for k = 2, 4.  For k = 0, 3 the generator is rational
/// (+1 or -1) and elements are normalized to have b = 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExt {
    pub k: u8,
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadExt {
    pub fn zero(k: u8) -> Self {
        QuadExt {
            k,
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn one(k: u8) -> Self {
        QuadExt {
            k,
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }

    pub fn from_rational(k: u8, a: BigRational) -> Self {
        QuadExt {
            k,
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_int(k: u8, n: i64) -> Self {
        Self::from_rational(k, BigRational::from_integer(BigInt::from(n)))
    }

    fn normalize(mut self) -> Self {
        if self.k == 0 && !self.b.is_zero() {
            let b = std::mem::replace(&mut self.b, BigRational::zero());
            self.a += b;
        } else if self.k == 3 && !self.b.is_zero() {
            let b = std::mem::replace(&mut self.b, BigRational::zero());
            self.a -= b;
        }
        self
    }

    /// xi^{k*m} expressed in the (1, xi^k) basis.
    pub fn power_of_generator(k: u8, m: usize) -> QuadExt {
        let gen = QuadExt {
            k,
            a: BigRational::zero(),
            b: BigRational::one(),
        }
        .normalize();
        let mut acc = QuadExt::one(k);
        for _ in 0..(m % 6) {
            acc = acc.mul(&gen);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.k, o.k);
        QuadExt {
            k: self.k,
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.k, o.k);
        QuadExt {
            k: self.k,
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt {
            k: self.k,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn scale_int(&self, n: i64) -> QuadExt {
        let f = BigRational::from_integer(BigInt::from(n));
        QuadExt {
            k: self.k,
            a: &self.a * &f,
            b: &self.b * &f,
        }
    }

    pub fn scale(&self, f: &BigRational) -> QuadExt {
        QuadExt {
            k: self.k,
            a: &self.a * f,
            b: &self.b * f,
        }
    }

    /// Trace of the generator: x + conj(x), rational per representation.
    fn gen_trace(k: u8) -> i64 {
        match k {
            1 | 5 => 1,
            2 | 4 => -1,
            0 => 2,
            3 => -2,
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, o: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.k, o.k);
        // x^2 = t x - 1 where t is the generator trace; unit roots have norm 1.
        let t = BigRational::from_integer(BigInt::from(Self::gen_trace(self.k)));
        let ac = &self.a * &o.a;
        let bd = &self.b * &o.b;
        let cross = &self.a * &o.b + &self.b * &o.a;
        QuadExt {
            k: self.k,
            a: ac - &bd,
            b: cross + bd * t,
        }
        .normalize()
    }

    /// Complex conjugation xi^k -> xi^{-k} inside the same field.
    pub fn conj(&self) -> QuadExt {
        // conj(x) = t - x for the unit-root generator x with trace t.
        let t = BigRational::from_integer(BigInt::from(Self::gen_trace(self.k)));
        QuadExt {
            k: self.k,
            a: &self.a + &self.b * t,
            b: -self.b.clone(),
        }
        .normalize()
    }

    pub fn inverse(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        let conj = self.conj();
        let n = self.mul(&conj);
        debug_assert!(n.b.is_zero());
        Some(conj.scale(&(BigRational::one() / n.a)))
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        let theta = std::f64::consts::PI / 3.0 * (self.k as f64);
        let gen = num_complex::Complex64::new(theta.cos(), theta.sin());
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        num_complex::Complex64::new(a, 0.0) + gen * b
    }
}

/// Cell classes of the Anderson-Putnam complex, carrying their orbit type.
/// Edge index 7 is eta; face indices follow the fixed tile order.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CellClass {
    VertexP,
    VertexQ,
    VertexS,
    Edge(u8),
    Face(u8),
}

impl CellClass {
    /// Dimension of the rotation orbit of this class in the full complex.
    pub fn orbit_size(&self) -> usize {
        match self {
            CellClass::VertexP | CellClass::VertexQ => 2,
            CellClass::VertexS => 6,
            CellClass::Edge(7) => 3, // eta, with r^3 eta = -eta
            CellClass::Edge(_) => 6,
            CellClass::Face(_) => 6,
        }
    }

    /// Whether the class survives in the representation r = xi^k:
    /// eta needs r^3 = -1 (k odd), p and q need r^2 = 1 (k = 0 or 3).
    pub fn lives_at(&self, k: u8) -> bool {
        match self {
            CellClass::VertexP | CellClass::VertexQ => k == 0 || k == 3,
            CellClass::Edge(7) => k % 2 == 1,
            _ => true,
        }
    }

    /// Reduces r^m * (cell) to (sign, basis index) in the class's own basis.
    fn reduce_power(&self, m: usize) -> (i64, usize) {
        match self {
            CellClass::VertexP | CellClass::VertexQ => (1, m % 2),
            CellClass::Edge(7) => {
                let mm = m % 6;
                if mm < 3 {
                    (1, mm)
                } else {
                    (-1, mm - 3)
                }
            }
            _ => (1, m % 6),
        }
    }
}

/// A matrix over Z[r]/(r^6 - 1) with labelled rows and columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupRingMatrix {
    pub row_labels: Vec<CellClass>,
    pub col_labels: Vec<CellClass>,
    pub data: Vec<Poly6>,
}

impl GroupRingMatrix {
    pub fn new(row_labels: Vec<CellClass>, col_labels: Vec<CellClass>) -> Self {
        let n = row_labels.len() * col_labels.len();
        GroupRingMatrix {
            row_labels,
            col_labels,
            data: vec![Poly6::ZERO; n],
        }
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly6 {
        &self.data[i * self.cols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly6) {
        let c = self.cols();
        self.data[i * c + j] = p;
    }

    pub fn mul(&self, rhs: &GroupRingMatrix) -> GroupRingMatrix {
        assert_eq!(self.cols(), rhs.rows());
        let mut out = GroupRingMatrix::new(self.row_labels.clone(), rhs.col_labels.clone());
        for i in 0..self.rows() {
            for j in 0..rhs.cols() {
                let mut acc = Poly6::ZERO;
                for t in 0..self.cols() {
                    acc = acc.add(&self.get(i, t).mul(rhs.get(t, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Entrywise r -> r^{-1}.
    pub fn conj(&self) -> GroupRingMatrix {
        let mut out = self.clone();
        for p in &mut out.data {
            *p = p.conj();
        }
        out
    }

    /// Keeps only rows/columns whose class survives at representation k,
    /// then evaluates entrywise at r = xi^k.
    pub fn evaluate(&self, k: u8) -> EvaluatedMatrix {
        let keep_rows: Vec<usize> = (0..self.rows())
            .filter(|&i| self.row_labels[i].lives_at(k))
            .collect();
        let keep_cols: Vec<usize> = (0..self.cols())
            .filter(|&j| self.col_labels[j].lives_at(k))
            .collect();
        let mut out = EvaluatedMatrix::zero(k, keep_rows.len(), keep_cols.len());
        for (oi, &i) in keep_rows.iter().enumerate() {
            for (oj, &j) in keep_cols.iter().enumerate() {
                out.set(oi, oj, self.get(i, j).eval(k));
            }
        }
        out.row_labels = keep_rows.iter().map(|&i| self.row_labels[i]).collect();
        out.col_labels = keep_cols.iter().map(|&j| self.col_labels[j]).collect();
        out
    }

    /// Expands r into permutation blocks, giving a plain integer matrix.
    /// Generic classes get the 6x6 cyclic block, eta the negacyclic 3-block,
    /// p and q the 2x2 swap.
    pub fn expand_integer(&self) -> IntMatrix {
        self.expand_with(|p| *p)
    }

    /// Expansion of the reflected matrix (entrywise r -> r^{-1}).
    pub fn expand_integer_conj(&self) -> IntMatrix {
        self.expand_with(|p| p.conj())
    }

    fn expand_with(&self, f: impl Fn(&Poly6) -> Poly6) -> IntMatrix {
        let row_sizes: Vec<usize> = self.row_labels.iter().map(|c| c.orbit_size()).collect();
        let col_sizes: Vec<usize> = self.col_labels.iter().map(|c| c.orbit_size()).collect();
        let offsets = |sizes: &[usize]| -> Vec<usize> {
            let mut off = vec![0usize];
            for &s in sizes {
                off.push(off.last().unwrap() + s);
            }
            off
        };
        let row_off = offsets(&row_sizes);
        let col_off = offsets(&col_sizes);
        let mut out = IntMatrix::zero(*row_off.last().unwrap(), *col_off.last().unwrap());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let p = f(self.get(i, j));
                if p.is_zero() {
                    continue;
                }
                // Column basis vector r^t * (col cell) maps through the entry:
                // each monomial c r^s contributes c * r^{s+t} * (row cell).
                for t in 0..col_sizes[j] {
                    for (s, &coef) in p.c.iter().enumerate() {
                        if coef == 0 {
                            continue;
                        }
                        let (sign, idx) = self.row_labels[i].reduce_power(s + t);
                        out[(row_off[i] + idx, col_off[j] + t)] += BigInt::from(coef * sign);
                    }
                }
            }
        }
        out
    }
}

/// An exact matrix over Q(xi^k).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvaluatedMatrix {
    pub k: u8,
    pub rows: usize,
    pub cols: usize,
    pub row_labels: Vec<CellClass>,
    pub col_labels: Vec<CellClass>,
    pub data: Vec<QuadExt>,
}

impl EvaluatedMatrix {
    pub fn zero(k: u8, rows: usize, cols: usize) -> Self {
        EvaluatedMatrix {
            k,
            rows,
            cols,
            row_labels: Vec::new(),
            col_labels: Vec::new(),
            data: vec![QuadExt::zero(k); rows * cols],
        }
    }

    pub fn identity(k: u8, n: usize) -> Self {
        let mut m = Self::zero(k, n, n);
        for i in 0..n {
            m.set(i, i, QuadExt::one(k));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadExt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadExt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, rhs: &EvaluatedMatrix) -> EvaluatedMatrix {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.k, rhs.k);
        let mut out = EvaluatedMatrix::zero(self.k, self.rows, rhs.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).add(&a.mul(rhs.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Entrywise complex conjugation xi^k -> xi^{-k}.
    pub fn conj_matrix(&self) -> EvaluatedMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.conj();
        }
        out
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn row_reduce(&self) -> (EvaluatedMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.get(r, j).clone();
                m.set(r, j, m.get(p, j).clone());
                m.set(p, j, tmp);
            }
            let inv = m.get(r, col).inverse().unwrap();
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, col).is_zero() {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1.len()
    }

    /// Basis of {x : x * self = 0} as rows of a matrix.
    pub fn left_kernel(&self) -> EvaluatedMatrix {
        let n = self.rows;
        let mut aug = EvaluatedMatrix::zero(self.k, n, self.cols + n);
        for i in 0..n {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols + i, QuadExt::one(self.k));
        }
        let (red, _) = aug.row_reduce();
        let mut rows = Vec::new();
        for i in 0..n {
            if (0..self.cols).all(|j| red.get(i, j).is_zero()) {
                rows.push(i);
            }
        }
        let mut out = EvaluatedMatrix::zero(self.k, rows.len(), n);
        for (oi, &i) in rows.iter().enumerate() {
            for j in 0..n {
                out.set(oi, j, red.get(i, self.cols + j).clone());
            }
        }
        out
    }

    /// Solves x * self = b over the field, if consistent.
    pub fn solve_left(&self, b: &[QuadExt]) -> Option<Vec<QuadExt>> {
        assert_eq!(b.len(), self.cols);
        let n = self.rows;
        // Row-reduce self augmented with the identity; then express b over
        // the reduced rows and pull the combination back.
        let mut aug = EvaluatedMatrix::zero(self.k, n, self.cols + n);
        for i in 0..n {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols + i, QuadExt::one(self.k));
        }
        let (red, pivots) = {
            // Reduce only on the left block columns.
            let mut m = aug;
            let mut piv = Vec::new();
            let mut r = 0usize;
            for col in 0..self.cols {
                if r == m.rows {
                    break;
                }
                let Some(p) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                    continue;
                };
                for j in 0..m.cols {
                    let tmp = m.get(r, j).clone();
                    m.set(r, j, m.get(p, j).clone());
                    m.set(p, j, tmp);
                }
                let inv = m.get(r, col).inverse().unwrap();
                for j in 0..m.cols {
                    let v = m.get(r, j).mul(&inv);
                    m.set(r, j, v);
                }
                for i in 0..m.rows {
                    if i == r || m.get(i, col).is_zero() {
                        continue;
                    }
                    let f = m.get(i, col).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
                piv.push(col);
                r += 1;
            }
            (m, piv)
        };
        // Reduce b against the echelon rows.
        let mut rem: Vec<QuadExt> = b.to_vec();
        let mut combo = vec![QuadExt::zero(self.k); n];
        for (ri, &pc) in pivots.iter().enumerate() {
            if rem[pc].is_zero() {
                continue;
            }
            let f = rem[pc].clone();
            for j in 0..self.cols {
                let v = rem[j].sub(&f.mul(red.get(ri, j)));
                rem[j] = v;
            }
            for j in 0..n {
                let v = combo[j].add(&f.mul(red.get(ri, self.cols + j)));
                combo[j] = v;
            }
        }
        if rem.iter().all(|x| x.is_zero()) {
            Some(combo)
        } else {
            None
        }
    }

    /// Stabilized rank of powers: rank(M^n) for large n, by repeated squaring.
    pub fn eventual_rank(&self) -> usize {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut r = m.rank();
        for _ in 0..8 {
            let m2 = m.mul(&m);
            let r2 = m2.rank();
            if r2 == r {
                return r;
            }
            m = m2;
            r = r2;
        }
        r
    }

    /// Characteristic polynomial, monic, low-to-high coefficients, by the
    /// Faddeev-LeVerrier trace recursion.
    pub fn charpoly(&self) -> Vec<QuadExt> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let k = self.k;
        let mut coeffs = vec![QuadExt::zero(k); n + 1];
        coeffs[n] = QuadExt::one(k);
        let mut acc = self.clone();
        let mut c_prev = QuadExt::one(k);
        for step in 1..=n {
            if step > 1 {
                let mut shifted = acc.clone();
                for i in 0..n {
                    let v = shifted.get(i, i).add(&c_prev);
                    shifted.set(i, i, v);
                }
                acc = self.mul(&shifted);
            }
            let mut tr = QuadExt::zero(k);
            for i in 0..n {
                tr = tr.add(acc.get(i, i));
            }
            let c = tr.scale(&BigRational::new(
                BigInt::from(-1),
                BigInt::from(step as i64),
            ));
            coeffs[n - step] = c.clone();
            c_prev = c;
        }
        coeffs
    }
}

/// Divides a polynomial (low-to-high coefficients) by the rational quadratic
/// t^2 + c1 t + c0; returns the quotient when the remainder vanishes.
pub fn divide_by_quadratic(poly: &[QuadExt], c1: i64, c0: i64) -> Option<Vec<QuadExt>> {
    if poly.len() < 3 {
        return None;
    }
    let k = poly[0].k;
    let n = poly.len() - 1;
    let mut rem: Vec<QuadExt> = poly.to_vec();
    let mut quot = vec![QuadExt::zero(k); n - 1];
    for d in (2..=n).rev() {
        let lead = rem[d].clone();
        if lead.is_zero() {
            continue;
        }
        quot[d - 2] = lead.clone();
        rem[d] = QuadExt::zero(k);
        let t1 = rem[d - 1].sub(&lead.scale_int(c1));
        rem[d - 1] = t1;
        let t0 = rem[d - 2].sub(&lead.scale_int(c0));
        rem[d - 2] = t0;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

/// Multiplicity of the eigenvalue 0: zero low-order coefficients.
pub fn zero_eigenvalue_multiplicity(poly: &[QuadExt]) -> usize {
    poly.iter().take_while(|c| c.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn poly_mul_wraps() {
        let r5 = Poly6::monomial(1, 5);
        let r3 = Poly6::monomial(1, 3);
        assert_eq!(r5.mul(&r3), Poly6::monomial(1, 2));
        let p = Poly6::from_monomials(&[(1, 0), (-1, 1)]);
        assert_eq!(p.mul(&p), Poly6::from_monomials(&[(1, 0), (-2, 1), (1, 2)]));
    }

    #[test]
    fn poly_conj_inverts_powers() {
        let p = Poly6::from_monomials(&[(2, 1), (3, 4)]);
        assert_eq!(p.conj(), Poly6::from_monomials(&[(2, 5), (3, 2)]));
        assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn quadext_minimal_polynomials() {
        // xi^2 = xi - 1 at k = 1.
        let x = QuadExt::power_of_generator(1, 1);
        assert_eq!(x.mul(&x), x.sub(&QuadExt::one(1)));
        // (xi^2)^2 = -xi^2 - 1 at k = 2.
        let y = QuadExt::power_of_generator(2, 1);
        assert_eq!(y.mul(&y), y.neg().sub(&QuadExt::one(2)));
        // k = 3: the generator is -1.
        assert_eq!(QuadExt::power_of_generator(3, 1), QuadExt::from_int(3, -1));
        for k in 0..6 {
            assert_eq!(QuadExt::power_of_generator(k, 6), QuadExt::one(k));
        }
    }

    #[test]
    fn quadext_conj_and_inverse() {
        let x = QuadExt {
            k: 1,
            a: rat(2),
            b: rat(-3),
        };
        assert_eq!(x.conj().conj(), x);
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), QuadExt::one(1));
        let c = QuadExt::from_int(0, 7);
        assert_eq!(c.conj(), c);
        // conj of xi at k = 1 is 1 - xi.
        let xi = QuadExt::power_of_generator(1, 1);
        assert_eq!(xi.conj(), QuadExt::one(1).sub(&xi));
    }

    #[test]
    fn eval_matches_complex_embedding() {
        let p = Poly6::from_monomials(&[(1, 0), (2, 1), (-1, 3), (4, 5)]);
        for k in 0..6u8 {
            let exact = p.eval(k).to_complex();
            let theta = std::f64::consts::PI / 3.0 * (k as f64);
            let base = num_complex::Complex64::new(theta.cos(), theta.sin());
            let mut expect = num_complex::Complex64::new(0.0, 0.0);
            for (i, &c) in p.c.iter().enumerate() {
                expect += base.powu(i as u32) * (c as f64);
            }
            assert!((exact - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn rank_and_kernel() {
        let mut m = EvaluatedMatrix::zero(1, 3, 3);
        let xi = QuadExt::power_of_generator(1, 1);
        m.set(0, 0, QuadExt::one(1));
        m.set(0, 1, xi.clone());
        m.set(1, 0, xi.clone());
        m.set(1, 1, xi.mul(&xi));
        m.set(2, 2, QuadExt::one(1));
        assert_eq!(m.rank(), 2);
        let ker = m.left_kernel();
        assert_eq!(ker.rows, 1);
        assert!(ker.mul(&m).is_zero());
        assert_eq!(EvaluatedMatrix::zero(2, 4, 4).rank(), 0);
    }

    #[test]
    fn eventual_rank_of_nilpotent_block() {
        let mut m = EvaluatedMatrix::zero(0, 3, 3);
        m.set(0, 1, QuadExt::one(0));
        m.set(1, 2, QuadExt::one(0));
        assert_eq!(m.rank(), 2);
        assert_eq!(m.eventual_rank(), 0);
        assert_eq!(EvaluatedMatrix::identity(1, 4).eventual_rank(), 4);
        // Rank stabilization: eventual_rank(M) == eventual_rank(M^2).
        assert_eq!(m.mul(&m).eventual_rank(), 0);
    }

    #[test]
    fn charpoly_of_companion_like_matrix() {
        // [[0, -1], [1, 8]] has charpoly t^2 - 8t + 1.
        let mut m = EvaluatedMatrix::zero(0, 2, 2);
        m.set(0, 1, QuadExt::from_int(0, -1));
        m.set(1, 0, QuadExt::from_int(0, 1));
        m.set(1, 1, QuadExt::from_int(0, 8));
        let cp = m.charpoly();
        assert_eq!(cp[0], QuadExt::from_int(0, 1));
        assert_eq!(cp[1], QuadExt::from_int(0, -8));
        assert_eq!(cp[2], QuadExt::from_int(0, 1));
        let q = divide_by_quadratic(&cp, -8, 1).unwrap();
        assert_eq!(q, vec![QuadExt::from_int(0, 1)]);
        assert!(divide_by_quadratic(&cp, -7, 1).is_none());
    }

    #[test]
    fn expand_integer_blocks() {
        let m = {
            let mut m = GroupRingMatrix::new(vec![CellClass::Edge(0)], vec![CellClass::Edge(1)]);
            m.set(0, 0, Poly6::monomial(1, 1));
            m
        };
        let e = m.expand_integer();
        assert_eq!((e.rows, e.cols), (6, 6));
        for t in 0..6 {
            assert_eq!(e[((t + 1) % 6, t)], BigInt::one());
        }
        // Negacyclic eta block: r^3 eta = -eta.
        let m2 = {
            let mut m = GroupRingMatrix::new(vec![CellClass::Edge(7)], vec![CellClass::Edge(7)]);
            m.set(0, 0, Poly6::monomial(1, 3));
            m
        };
        let e2 = m2.expand_integer();
        assert_eq!((e2.rows, e2.cols), (3, 3));
        for t in 0..3 {
            assert_eq!(e2[(t, t)], BigInt::from(-1));
        }
        // Swap block for p: r p = rp, r(rp) = p.
        let m3 = {
            let mut m = GroupRingMatrix::new(vec![CellClass::VertexP], vec![CellClass::VertexP]);
            m.set(0, 0, Poly6::monomial(1, 1));
            m
        };
        let e3 = m3.expand_integer();
        assert_eq!((e3.rows, e3.cols), (2, 2));
        assert_eq!(e3[(0, 1)], BigInt::one());
        assert_eq!(e3[(1, 0)], BigInt::one());
    }

    #[test]
    fn expand_commutes_with_products() {
        let mut a = GroupRingMatrix::new(
            vec![CellClass::Face(0), CellClass::Face(1)],
            vec![CellClass::Face(2), CellClass::Face(3)],
        );
        a.set(0, 0, Poly6::from_monomials(&[(1, 2), (-1, 0)]));
        a.set(0, 1, Poly6::monomial(2, 5));
        a.set(1, 0, Poly6::monomial(-1, 1));
        a.set(1, 1, Poly6::from_monomials(&[(1, 0), (1, 3)]));
        let mut b = GroupRingMatrix::new(
            vec![CellClass::Face(2), CellClass::Face(3)],
            vec![CellClass::Face(4)],
        );
        b.set(0, 0, Poly6::from_monomials(&[(1, 1), (1, 4)]));
        b.set(1, 0, Poly6::monomial(3, 2));
        assert_eq!(
            a.mul(&b).expand_integer(),
            a.expand_integer().mul(&b.expand_integer())
        );
    }

    #[test]
    fn solve_left_field() {
        let mut m = EvaluatedMatrix::zero(1, 2, 2);
        let xi = QuadExt::power_of_generator(1, 1);
        m.set(0, 0, QuadExt::one(1));
        m.set(0, 1, xi.clone());
        m.set(1, 1, QuadExt::one(1));
        let b = vec![QuadExt::one(1), QuadExt::zero(1)];
        let x = m.solve_left(&b).unwrap();
        assert_eq!(x[0], QuadExt::one(1));
        assert_eq!(x[1], xi.neg());
        // Inconsistent system.
        let mut singular = EvaluatedMatrix::zero(1, 1, 2);
        singular.set(0, 0, QuadExt::one(1));
        assert!(singular
            .solve_left(&[QuadExt::zero(1), QuadExt::one(1)])
            .is_none());
    }
}
