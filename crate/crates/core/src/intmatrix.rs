//! Dense exact integer matrices: Hermite and Smith normal forms, kernels,
//! ranks and linear solves over Z.
//!
//! Sizes in this crate stay around 54x54 (the expanded Anderson-Putnam
//! boundary maps), so a straightforward dense implementation with BigInt
//! entries is entirely adequate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let p = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_multiple_of_row(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let p = q * &self[(b, j)];
            self[(a, j)] += p;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    /// Canonical row Hermite normal form.  Returns (H, U) with U unimodular
    /// and U * self = H; pivots are positive with entries above each pivot
    /// reduced into [0, pivot).  Zero rows sink to the bottom.
    pub fn hnf_with_transform(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == h.rows {
                break;
            }
            let r = pivot_row;
            let Some(first) = (r..h.rows).find(|&i| !h[(i, col)].is_zero()) else {
                continue;
            };
            h.swap_rows(r, first);
            u.swap_rows(r, first);
            for i in (r + 1)..h.rows {
                // Euclid on the pair of column entries until one vanishes.
                while !h[(i, col)].is_zero() {
                    let q = &h[(r, col)] / &h[(i, col)];
                    h.add_multiple_of_row(r, i, &-q.clone());
                    u.add_multiple_of_row(r, i, &-q);
                    h.swap_rows(r, i);
                    u.swap_rows(r, i);
                }
            }
            if h[(r, col)].is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            let p = h[(r, col)].clone();
            for i in 0..r {
                let q = h[(i, col)].div_floor(&p);
                h.add_multiple_of_row(i, r, &-q.clone());
                u.add_multiple_of_row(i, r, &-q);
            }
            pivot_row = r + 1;
        }
        (h, u)
    }

    pub fn hnf(&self) -> IntMatrix {
        self.hnf_with_transform().0
    }

    pub fn rank(&self) -> usize {
        let h = self.hnf();
        (0..h.rows)
            .filter(|&i| (0..h.cols).any(|j| !h[(i, j)].is_zero()))
            .count()
    }

    /// Basis of the left kernel {x : x * self = 0} as rows, in HNF.
    /// This is a basis of the full (saturated) kernel lattice.
    pub fn left_kernel(&self) -> IntMatrix {
        let (h, u) = self.hnf_with_transform();
        let mut zero_rows = Vec::new();
        for i in 0..h.rows {
            if (0..h.cols).all(|j| h[(i, j)].is_zero()) {
                zero_rows.push(i);
            }
        }
        let mut k = IntMatrix::zero(zero_rows.len(), self.rows);
        for (out, &i) in zero_rows.iter().enumerate() {
            for j in 0..self.rows {
                k[(out, j)] = u[(i, j)].clone();
            }
        }
        k.hnf()
    }

    /// Basis of the right kernel {x : self * x = 0}, one vector per row.
    pub fn right_kernel(&self) -> IntMatrix {
        self.transpose().left_kernel()
    }

    /// Solves x * self = b for one integer row vector x, if possible.
    pub fn solve_left(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.cols);
        let (h, u) = self.hnf_with_transform();
        let mut rem: Vec<BigInt> = b.to_vec();
        let mut coeff = vec![BigInt::zero(); h.rows];
        for i in 0..h.rows {
            let Some(pc) = (0..h.cols).find(|&j| !h[(i, j)].is_zero()) else {
                continue;
            };
            if rem[pc].is_zero() {
                continue;
            }
            let (q, r) = rem[pc].div_rem(&h[(i, pc)]);
            if !r.is_zero() {
                return None;
            }
            for j in 0..h.cols {
                let p = &q * &h[(i, j)];
                rem[j] -= p;
            }
            coeff[i] = q;
        }
        if rem.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![BigInt::zero(); self.rows];
        for (i, c) in coeff.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.rows {
                let p = c * &u[(i, j)];
                x[j] += p;
            }
        }
        Some(x)
    }

    /// Smith normal form invariant factors (positive, each dividing the next).
    ///
    /// The pivot is re-selected as the globally smallest nonzero entry after
    /// every elimination sweep, and quotients are balanced (remainders at
    /// most half the pivot), which keeps intermediate entries small.
    pub fn snf_invariant_factors(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let n = m.rows.min(m.cols);
        // Rounded division: a = q b + r with |r| <= |b| / 2.
        let balanced_div = |a: &BigInt, b: &BigInt| -> BigInt {
            let q = a.div_floor(b);
            let r = a - &q * b;
            if r.abs() * BigInt::from(2) > b.abs() {
                if b.is_negative() {
                    q - BigInt::one()
                } else {
                    q + BigInt::one()
                }
            } else {
                q
            }
        };
        let mut t = 0usize;
        while t < n {
            // Move the smallest nonzero entry of the block to (t, t).
            let pick = |m: &IntMatrix, t: usize| -> Option<(usize, usize)> {
                let mut best: Option<(usize, usize)> = None;
                for i in t..m.rows {
                    for j in t..m.cols {
                        if m[(i, j)].is_zero() {
                            continue;
                        }
                        match best {
                            None => best = Some((i, j)),
                            Some((bi, bj)) => {
                                if m[(i, j)].abs() < m[(bi, bj)].abs() {
                                    best = Some((i, j));
                                }
                            }
                        }
                    }
                }
                best
            };
            let Some((pi, pj)) = pick(&m, t) else { break };
            m.swap_rows(t, pi);
            m.swap_cols(t, pj);
            loop {
                // One balanced sweep over column t and row t.
                for i in (t + 1)..m.rows {
                    if m[(i, t)].is_zero() {
                        continue;
                    }
                    let q = balanced_div(&m[(i, t)], &m[(t, t)]);
                    m.add_multiple_of_row(i, t, &-q);
                }
                for j in (t + 1)..m.cols {
                    if m[(t, j)].is_zero() {
                        continue;
                    }
                    let q = balanced_div(&m[(t, j)], &m[(t, t)]);
                    for i in 0..m.rows {
                        let p = &q * &m[(i, t)];
                        m[(i, j)] -= p;
                    }
                }
                let col_clear = ((t + 1)..m.rows).all(|i| m[(i, t)].is_zero());
                let row_clear = ((t + 1)..m.cols).all(|j| m[(t, j)].is_zero());
                if col_clear && row_clear {
                    break;
                }
                // Some remainder survived; it is at most half the pivot, so
                // re-picking strictly shrinks the pivot.
                let (pi, pj) = pick(&m, t).expect("nonzero remainder exists");
                m.swap_rows(t, pi);
                m.swap_cols(t, pj);
            }
            // The pivot must divide everything in the remaining block.
            let p = m[(t, t)].clone();
            let mut fixed = true;
            'scan: for i in (t + 1)..m.rows {
                for j in (t + 1)..m.cols {
                    if !(&m[(i, j)] % &p).is_zero() {
                        m.add_multiple_of_row(t, i, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                t += 1;
            }
        }
        (0..n)
            .map(|i| m[(i, i)].abs())
            .filter(|d| !d.is_zero())
            .collect()
    }

    /// Determinant by Bareiss fraction-free elimination (square matrices).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(swap) = ((k + 1)..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}
