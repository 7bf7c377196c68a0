//! Exact arithmetic in the quartic field K = Q(sqrt(-3), sqrt(-5)).
//!
//! Every element is stored as rational coordinates over the basis
//! (1, xi, lambda, lambda*xi), where xi = e^{2 pi i / 6} and
//! lambda = 4 + sqrt(15).  Products reduce via the minimal polynomials
//! xi^2 = xi - 1 and lambda^2 = 8 lambda - 1, so the coordinate ring is
//! closed under all field operations.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub const SQRT_3: f64 = 1.732050807568877293527446341505872367_f64;
pub const SQRT_15: f64 = 3.872983346207416885179265399782399611_f64;

/// lambda = 4 + sqrt(15) as a float, for embeddings and shadows.
pub const LAMBDA_F64: f64 = 4.0 + SQRT_15;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element a + b xi + c lambda + d lambda xi of K, exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub coords: [BigRational; 4],
}

impl RingElement {
    pub fn new(coords: [BigRational; 4]) -> Self {
        RingElement { coords }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        RingElement::new([big(a), big(b), big(c), big(d)])
    }

    /// Integer coordinates divided by a common denominator.
    pub fn from_ints_over(n: [i64; 4], den: i64) -> Self {
        let d = big(den);
        RingElement::new([
            big(n[0]) / &d,
            big(n[1]) / &d,
            big(n[2]) / &d,
            big(n[3]) / &d,
        ])
    }

    pub fn zero() -> Self {
        RingElement::from_ints(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        RingElement::from_ints(1, 0, 0, 0)
    }

    pub fn xi() -> Self {
        RingElement::from_ints(0, 1, 0, 0)
    }

    pub fn lambda() -> Self {
        RingElement::from_ints(0, 0, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// True when all four coordinates are integers, i.e. the element
    /// lies in the order O = Z[xi, lambda].
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }

    /// Complex conjugation: xi -> 1 - xi, lambda fixed.
    pub fn conj(&self) -> Self {
        let [a, b, c, d] = &self.coords;
        RingElement::new([a + b, -b, c + d, -d])
    }

    /// Galois map to internal space: xi -> 1 - xi and lambda -> 8 - lambda.
    pub fn star(&self) -> Self {
        let [a, b, c, d] = &self.coords;
        RingElement::new([
            a + b + (c + d) * big(8),
            -b - big(8) * d,
            -c - d,
            d.clone(),
        ])
    }

    /// The remaining Galois conjugate: lambda -> 8 - lambda, xi fixed.
    pub fn prime(&self) -> Self {
        let [a, b, c, d] = &self.coords;
        RingElement::new([a + big(8) * c, b + big(8) * d, -c, -d])
    }

    /// Multiplication by xi (cheaper than a full product).
    pub fn mul_xi(&self) -> Self {
        let [a, b, c, d] = &self.coords;
        RingElement::new([-b, a + b, -d, c + d])
    }

    pub fn mul_xi_pow(&self, m: u8) -> Self {
        let mut v = self.clone();
        for _ in 0..(m % 6) {
            v = v.mul_xi();
        }
        v
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RingElement::new([
            &self.coords[0] * s,
            &self.coords[1] * s,
            &self.coords[2] * s,
            &self.coords[3] * s,
        ])
    }

    pub fn scale_int(&self, s: i64) -> Self {
        self.scale(&big(s))
    }

    /// Field inverse via the norm: 1/z = (z-bar z' z-bar') / N(z).
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let cofactor = self.conj() * self.prime() * self.conj().prime();
        let n = (self.clone() * cofactor.clone()).coords[0].clone();
        // z * cofactor = N(z) is rational; the remaining coords must vanish.
        debug_assert!({
            let p = self.clone() * cofactor.clone();
            p.coords[1].is_zero() && p.coords[2].is_zero() && p.coords[3].is_zero()
        });
        Some(cofactor.scale(&(BigRational::one() / n)))
    }

    /// Field norm N(z) = z z-bar z' z-bar', an exact rational.
    pub fn norm(&self) -> BigRational {
        let zz = self.abs_squared();
        let zz_p = zz.conj();
        zz.mul(&zz_p).p
    }

    /// |z|^2 = z z-bar as an exact element of Q(sqrt(15)).
    pub fn abs_squared(&self) -> RealQuadratic {
        (self.conj() * self.clone()).re_part()
    }

    /// Real part as an element of Q(sqrt(15)) in the (1, lambda) basis.
    /// Re(a + b xi + c lambda + d lambda xi) = (a + b/2) + (c + d/2) lambda.
    pub fn re_part(&self) -> RealQuadratic {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        RealQuadratic {
            p: &self.coords[0] + &self.coords[1] * &half,
            q: &self.coords[2] + &self.coords[3] * &half,
        }
    }

    /// Imaginary part divided by sqrt(3)/2, as an element of Q(sqrt(15)).
    /// Im(a + b xi + c lambda + d lambda xi) = (sqrt(3)/2) (b + d lambda).
    pub fn im_part_sqrt3_halves(&self) -> RealQuadratic {
        RealQuadratic {
            p: self.coords[1].clone(),
            q: self.coords[3].clone(),
        }
    }

    /// Numerical embedding into C (physical space).
    pub fn embed(&self) -> Complex64 {
        let [a, b, c, d] = &self.coords;
        let (a, b, c, d) = (to_f64(a), to_f64(b), to_f64(c), to_f64(d));
        let re = a + b * 0.5 + LAMBDA_F64 * (c + d * 0.5);
        let im = (SQRT_3 / 2.0) * (b + d * LAMBDA_F64);
        Complex64::new(re, im)
    }

    /// Numerical embedding into internal space, embed(star(x)).
    pub fn embed_internal(&self) -> Complex64 {
        self.star().embed()
    }

    /// Clears denominators: returns integer numerators and the lcm denominator.
    pub fn to_integer_coords(&self) -> ([BigInt; 4], BigInt) {
        let mut den = BigInt::one();
        for c in &self.coords {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let nums = [
            (&self.coords[0] * BigRational::from_integer(den.clone()))
                .to_integer(),
            (&self.coords[1] * BigRational::from_integer(den.clone()))
                .to_integer(),
            (&self.coords[2] * BigRational::from_integer(den.clone()))
                .to_integer(),
            (&self.coords[3] * BigRational::from_integer(den.clone()))
                .to_integer(),
        ];
        (nums, den)
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap())
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {} xi + {} lam + {} lam xi)",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(self, rhs: RingElement) -> RingElement {
        &self + &rhs
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        RingElement::new([
            &self.coords[0] + &rhs.coords[0],
            &self.coords[1] + &rhs.coords[1],
            &self.coords[2] + &rhs.coords[2],
            &self.coords[3] + &rhs.coords[3],
        ])
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        for i in 0..4 {
            self.coords[i] += &rhs.coords[i];
        }
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(self, rhs: RingElement) -> RingElement {
        &self - &rhs
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        RingElement::new([
            &self.coords[0] - &rhs.coords[0],
            &self.coords[1] - &rhs.coords[1],
            &self.coords[2] - &rhs.coords[2],
            &self.coords[3] - &rhs.coords[3],
        ])
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        for i in 0..4 {
            self.coords[i] -= &rhs.coords[i];
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::new([
            -self.coords[0].clone(),
            -self.coords[1].clone(),
            -self.coords[2].clone(),
            -self.coords[3].clone(),
        ])
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        &self * &rhs
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let [a, b, c, d] = &self.coords;
        let [e, f, g, h] = &rhs.coords;
        let eight = big(8);
        // Expand in the basis and reduce with xi^2 = xi - 1, lam^2 = 8 lam - 1.
        let c0 = a * e - b * f - c * g + d * h;
        let c1 = a * f + b * e + b * f - c * h - d * g - d * h;
        let c2 = a * g - b * h + c * e + &eight * (c * g) - d * f - &eight * (d * h);
        let c3 = a * h
            + b * g
            + b * h
            + c * f
            + &eight * (c * h)
            + d * e
            + d * f
            + &eight * (d * g)
            + &eight * (d * h);
        RingElement::new([c0, c1, c2, c3])
    }
}

/// An exact element p + q lambda of the real quadratic field Q(sqrt(15)).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct RealQuadratic {
    pub p: BigRational,
    pub q: BigRational,
}

impl RealQuadratic {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        RealQuadratic { p, q }
    }

    pub fn from_ints(p: i64, q: i64) -> Self {
        RealQuadratic::new(big(p), big(q))
    }

    pub fn zero() -> Self {
        RealQuadratic::from_ints(0, 0)
    }

    pub fn one() -> Self {
        RealQuadratic::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// The algebraic conjugation sqrt(15) -> -sqrt(15), i.e. lambda -> 8 - lambda.
    pub fn conj(&self) -> Self {
        RealQuadratic {
            p: &self.p + big(8) * &self.q,
            q: -self.q.clone(),
        }
    }

    pub fn add(&self, o: &RealQuadratic) -> Self {
        RealQuadratic {
            p: &self.p + &o.p,
            q: &self.q + &o.q,
        }
    }

    pub fn sub(&self, o: &RealQuadratic) -> Self {
        RealQuadratic {
            p: &self.p - &o.p,
            q: &self.q - &o.q,
        }
    }

    pub fn neg(&self) -> Self {
        RealQuadratic {
            p: -self.p.clone(),
            q: -self.q.clone(),
        }
    }

    /// (p + q lam)(u + v lam) with lam^2 = 8 lam - 1.
    pub fn mul(&self, o: &RealQuadratic) -> Self {
        RealQuadratic {
            p: &self.p * &o.p - &self.q * &o.q,
            q: &self.p * &o.q + &self.q * &o.p + big(8) * (&self.q * &o.q),
        }
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RealQuadratic {
            p: &self.p * s,
            q: &self.q * s,
        }
    }

    /// Rational trace-norm (p + q lam)(p + q lam') with lam lam' = 1.
    pub fn field_norm(&self) -> BigRational {
        &self.p * &self.p + big(8) * &self.p * &self.q + &self.q * &self.q
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.field_norm();
        Some(self.conj().scale(&(BigRational::one() / n)))
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.p) + to_f64(&self.q) * LAMBDA_F64
    }

    /// Exact sign of p + q lambda with lambda = 4 + sqrt(15).
    pub fn signum(&self) -> i32 {
        // Rewrite as P + Q sqrt(15) with P = p + 4q, Q = q.
        let cap_p = &self.p + big(4) * &self.q;
        let cap_q = &self.q;
        if cap_p.is_zero() && cap_q.is_zero() {
            return 0;
        }
        let sp = rat_sign(&cap_p);
        let sq = rat_sign(cap_q);
        if sp >= 0 && sq >= 0 {
            return 1;
        }
        if sp <= 0 && sq <= 0 {
            return -1;
        }
        // Opposite signs: compare P^2 with 15 Q^2.
        let diff = &cap_p * &cap_p - big(15) * cap_q * cap_q;
        if sp > 0 {
            rat_sign(&diff)
        } else {
            -rat_sign(&diff)
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact "dot product" x.y = Re(x-bar y) as an element of Q(sqrt(15)).
pub fn pairing(x: &RingElement, y: &RingElement) -> RealQuadratic {
    (x.conj() * y.clone()).re_part()
}

/// The rational trace form used for lattice duality: x.y + (x.y)'.
/// This equals the standard inner product of the Minkowski lifts in R^4.
pub fn trace_form(x: &RingElement, y: &RingElement) -> BigRational {
    let p = pairing(x, y);
    let t = p.add(&p.conj());
    debug_assert!(t.q.is_zero());
    t.p
}

/// A ring element with small integer coordinates over a shared denominator.
///
/// Patch generation touches millions of translations; this fixed-width quad
/// avoids BigRational allocation on the hot path.  Coordinates stay far below
/// i64 range for any patch the engine is asked to build.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Quad {
    pub c: [i64; 4],
}

impl Quad {
    pub const ZERO: Quad = Quad { c: [0, 0, 0, 0] };

    pub fn new(a: i64, b: i64, cc: i64, d: i64) -> Self {
        Quad { c: [a, b, cc, d] }
    }

    pub fn add(self, o: Quad) -> Quad {
        Quad::new(
            self.c[0] + o.c[0],
            self.c[1] + o.c[1],
            self.c[2] + o.c[2],
            self.c[3] + o.c[3],
        )
    }

    pub fn sub(self, o: Quad) -> Quad {
        Quad::new(
            self.c[0] - o.c[0],
            self.c[1] - o.c[1],
            self.c[2] - o.c[2],
            self.c[3] - o.c[3],
        )
    }

    pub fn neg(self) -> Quad {
        Quad::new(-self.c[0], -self.c[1], -self.c[2], -self.c[3])
    }

    pub fn scale(self, s: i64) -> Quad {
        Quad::new(self.c[0] * s, self.c[1] * s, self.c[2] * s, self.c[3] * s)
    }

    pub fn mul(self, o: Quad) -> Quad {
        let [a, b, c, d] = self.c;
        let [e, f, g, h] = o.c;
        Quad::new(
            a * e - b * f - c * g + d * h,
            a * f + b * e + b * f - c * h - d * g - d * h,
            a * g - b * h + c * e + 8 * c * g - d * f - 8 * d * h,
            a * h + b * g + b * h + c * f + 8 * c * h + d * e + d * f + 8 * d * g + 8 * d * h,
        )
    }

    pub fn conj(self) -> Quad {
        let [a, b, c, d] = self.c;
        Quad::new(a + b, -b, c + d, -d)
    }

    pub fn star(self) -> Quad {
        let [a, b, c, d] = self.c;
        Quad::new(a + b + 8 * (c + d), -b - 8 * d, -c - d, d)
    }

    pub fn mul_xi(self) -> Quad {
        let [a, b, c, d] = self.c;
        Quad::new(-b, a + b, -d, c + d)
    }

    pub fn mul_xi_pow(self, m: u8) -> Quad {
        let mut v = self;
        for _ in 0..(m % 6) {
            v = v.mul_xi();
        }
        v
    }

    pub fn divisible_by(self, k: i64) -> bool {
        self.c.iter().all(|x| x % k == 0)
    }

    pub fn div_exact(self, k: i64) -> Quad {
        Quad::new(self.c[0] / k, self.c[1] / k, self.c[2] / k, self.c[3] / k)
    }

    pub fn embed(self) -> Complex64 {
        let [a, b, c, d] = self.c.map(|x| x as f64);
        Complex64::new(
            a + b * 0.5 + LAMBDA_F64 * (c + d * 0.5),
            (SQRT_3 / 2.0) * (b + d * LAMBDA_F64),
        )
    }

    pub fn embed_internal(self) -> Complex64 {
        self.star().embed()
    }

    pub fn to_ring(self) -> RingElement {
        RingElement::from_ints(self.c[0], self.c[1], self.c[2], self.c[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn xi_squared_reduces() {
        let xi = RingElement::xi();
        assert_eq!(&xi * &xi, RingElement::from_ints(-1, 1, 0, 0));
    }

    #[test]
    fn lambda_squared_reduces() {
        let l = RingElement::lambda();
        assert_eq!(&l * &l, RingElement::from_ints(-1, 0, 8, 0));
    }

    #[test]
    fn xi_times_g1() {
        // g1 = -1 - xi + lam - 2 lam xi; xi g1 = 1 - 2 xi + 2 lam - lam xi.
        let g1 = RingElement::from_ints(-1, -1, 1, -2);
        let prod = RingElement::xi() * g1;
        assert_eq!(prod, RingElement::from_ints(1, -2, 2, -1));
    }

    #[test]
    fn embed_is_multiplicative_on_random_pairs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 17) as i64 - 8
        };
        for _ in 0..1000 {
            let x = RingElement::from_ints(next(), next(), next(), next());
            let y = RingElement::from_ints(next(), next(), next(), next());
            let lhs = (&x * &y).embed();
            let rhs = x.embed() * y.embed();
            let scale = 1.0 + lhs.norm().max(rhs.norm());
            assert!((lhs - rhs).norm() / scale < 1e-9, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn conj_and_star_are_ring_homs() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 11) as i64 - 5
        };
        for _ in 0..200 {
            let x = RingElement::from_ints(next(), next(), next(), next());
            let y = RingElement::from_ints(next(), next(), next(), next());
            assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            assert_eq!((&x + &y).star(), &x.star() + &y.star());
            assert_eq!((&x * &y).star(), &x.star() * &y.star());
            assert_eq!((&x * &y).prime(), &x.prime() * &y.prime());
            assert_eq!(x.star().star(), x);
        }
    }

    #[test]
    fn conj_examples() {
        assert_eq!(RingElement::xi().conj(), RingElement::from_ints(1, -1, 0, 0));
        assert_eq!(RingElement::lambda().conj(), RingElement::lambda());
        // conj(lam xi) = lam - lam xi
        assert_eq!(
            RingElement::from_ints(0, 0, 0, 1).conj(),
            RingElement::from_ints(0, 0, 1, -1)
        );
    }

    #[test]
    fn star_examples() {
        assert_eq!(
            RingElement::lambda().star(),
            RingElement::from_ints(8, 0, -1, 0)
        );
        assert_eq!(RingElement::one().star(), RingElement::one());
        // star(lam xi) = (8 - lam)(1 - xi) = 8 - 8 xi - lam + lam xi
        assert_eq!(
            RingElement::from_ints(0, 0, 0, 1).star(),
            RingElement::from_ints(8, -8, -1, 1)
        );
        // star is an involution and commutes with conj.
        let z = RingElement::from_ints(3, -2, 5, 7);
        assert_eq!(z.star().star(), z);
        assert_eq!(z.star().conj(), z.conj().star());
    }

    #[test]
    fn embed_values() {
        assert!(approx(
            RingElement::xi().embed(),
            Complex64::new(0.5, SQRT_3 / 2.0),
            1e-12
        ));
        assert!(approx(
            RingElement::lambda().embed(),
            Complex64::new(7.872983346207417, 0.0),
            1e-12
        ));
        assert!(approx(
            RingElement::lambda().embed_internal(),
            Complex64::new(0.12701665379258298, 0.0),
            1e-12
        ));
    }

    #[test]
    fn norm_values() {
        assert_eq!(RingElement::from_ints(3, 0, 0, 0).norm(), big(81));
        assert_eq!(RingElement::lambda().norm(), big(1));
        assert_eq!(RingElement::xi().norm(), big(1));
        let lamxi = RingElement::from_ints(0, 0, 0, 1);
        assert_eq!(lamxi.norm(), big(1));
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut state = 0x12345678u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 9) as i64 - 4
        };
        for _ in 0..100 {
            let x = RingElement::from_ints(next(), next(), next(), next());
            let y = RingElement::from_ints(next(), next(), next(), next());
            assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }
    }

    #[test]
    fn pairing_values() {
        let one = RingElement::one();
        let xi = RingElement::xi();
        assert_eq!(pairing(&one, &one), RealQuadratic::from_ints(1, 0));
        assert_eq!(pairing(&xi, &xi), RealQuadratic::from_ints(1, 0));
        // lam.1 + (lam.1)' = lam + (8 - lam) = 8
        let p = pairing(&RingElement::lambda(), &one);
        assert_eq!(p.add(&p.conj()), RealQuadratic::from_ints(8, 0));
        assert_eq!(trace_form(&RingElement::lambda(), &one), big(8));
    }

    #[test]
    fn pairing_is_symmetric_and_bilinear() {
        let x = RingElement::from_ints(1, 2, -1, 3);
        let y = RingElement::from_ints(-2, 0, 4, 1);
        let z = RingElement::from_ints(5, -3, 2, -2);
        assert_eq!(pairing(&x, &y), pairing(&y, &x));
        assert_eq!(
            pairing(&(&x + &z), &y),
            pairing(&x, &y).add(&pairing(&z, &y))
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let z = RingElement::from_ints(2, -1, 3, 1);
        let inv = z.inverse().unwrap();
        assert_eq!(z * inv, RingElement::one());
        assert!(RingElement::zero().inverse().is_none());
    }

    #[test]
    fn real_quadratic_signs() {
        assert_eq!(RealQuadratic::from_ints(0, 0).signum(), 0);
        assert_eq!(RealQuadratic::from_ints(1, 0).signum(), 1);
        assert_eq!(RealQuadratic::from_ints(-1, 0).signum(), -1);
        // 8 - lambda = 4 - sqrt(15) > 0
        assert_eq!(RealQuadratic::from_ints(8, -1).signum(), 1);
        // 7 - lambda < 0
        assert_eq!(RealQuadratic::from_ints(7, -1).signum(), -1);
        // lambda * (8 - lambda) = 1
        let l = RealQuadratic::from_ints(0, 1);
        assert_eq!(l.mul(&l.conj()), RealQuadratic::one());
    }

    #[test]
    fn real_quadratic_inverse() {
        let x = RealQuadratic::from_ints(3, -2);
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), RealQuadratic::one());
    }

    #[test]
    fn quad_matches_ring_element() {
        let mut state = 77u64;
        let mut next = move || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            ((state >> 40) % 13) as i64 - 6
        };
        for _ in 0..200 {
            let a = Quad::new(next(), next(), next(), next());
            let b = Quad::new(next(), next(), next(), next());
            assert_eq!(a.mul(b).to_ring(), a.to_ring() * b.to_ring());
            assert_eq!(a.conj().to_ring(), a.to_ring().conj());
            assert_eq!(a.star().to_ring(), a.to_ring().star());
            assert_eq!(a.mul_xi().to_ring(), a.to_ring().mul_xi());
        }
    }
}
