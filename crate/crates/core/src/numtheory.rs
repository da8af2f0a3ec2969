//! Integer utilities: extended gcd, residue classes, the linear Diophantine
//! solver, and the coefficient/series formulas used by the density modules.
//!
//! All quantities are exact. Counts and moduli are [`BigInt`], densities are
//! [`BigRational`] (always reduced, denominator positive).

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Extended Euclidean algorithm.
///
/// Returns `(g, s, t)` with `g = gcd(a, b) > 0` and `s*a + t*b = g`.
/// Errors when both inputs are zero.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::UndefinedGcd);
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    debug_assert_eq!(&old_s * a + &old_t * b, old_r);
    Ok((old_r, old_s, old_t))
}

/// An arithmetic progression `{ n : n = rep (mod modulus) }`.
///
/// The representative is normalized to `0 <= rep < modulus` and the modulus
/// is at least 1, so a modulus of 1 denotes all integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass {
    rep: BigInt,
    modulus: BigInt,
}

impl ResidueClass {
    pub fn new(rep: BigInt, modulus: BigInt) -> Result<Self> {
        if modulus < BigInt::one() {
            return Err(Error::InvalidModulus(modulus.to_string()));
        }
        let rep = rep.mod_floor(&modulus);
        Ok(ResidueClass { rep, modulus })
    }

    /// Convenience constructor from machine integers.
    pub fn of(rep: i64, modulus: u64) -> Self {
        ResidueClass::new(BigInt::from(rep), BigInt::from(modulus))
            .expect("modulus >= 1")
    }

    /// The whole of the integers, written `0 (mod 1)`.
    pub fn all() -> Self {
        ResidueClass::of(0, 1)
    }

    pub fn rep(&self) -> &BigInt {
        &self.rep
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        n.mod_floor(&self.modulus) == self.rep
    }

    /// The member `rep + q * modulus`.
    pub fn member(&self, q: i64) -> BigInt {
        &self.rep + BigInt::from(q) * &self.modulus
    }

    /// Intersection of two progressions by the Chinese remainder theorem.
    ///
    /// Returns `None` when the residues are incompatible.
    pub fn intersect(&self, other: &ResidueClass) -> Option<ResidueClass> {
        let (g, s, _) = extended_gcd(&self.modulus, &other.modulus).expect("moduli >= 1");
        let diff = &other.rep - &self.rep;
        let (d, rem) = diff.div_rem(&g);
        if !rem.is_zero() {
            return None;
        }
        let lcm = &self.modulus / &g * &other.modulus;
        // rep = self.rep + self.modulus * (s * d mod (other.modulus / g))
        let step = &other.modulus / &g;
        let k = (s * d).mod_floor(&step);
        let rep = (&self.rep + &self.modulus * k).mod_floor(&lcm);
        Some(ResidueClass { rep, modulus: lcm })
    }

    /// Density of the class among all integers, `1/modulus`.
    pub fn density(&self) -> BigRational {
        BigRational::new(BigInt::one(), self.modulus.clone())
    }
}

impl std::fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.rep, self.modulus)
    }
}

/// The coupled solution classes of a linear Diophantine equation
/// `c = b*y - a*x`.
///
/// Both classes advance with the same parameter: `(x0 + b*q, y0 + a*q)` is a
/// solution pair for every integer `q`. The classes alone describe where the
/// solutions live; only aligned pairs satisfy the equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiophantineSolution {
    x0: BigInt,
    y0: BigInt,
    a: BigInt,
    b: BigInt,
}

impl DiophantineSolution {
    pub fn x_class(&self) -> ResidueClass {
        ResidueClass::new(self.x0.clone(), self.b.clone()).expect("b >= 1")
    }

    pub fn y_class(&self) -> ResidueClass {
        ResidueClass::new(self.y0.clone(), self.a.clone()).expect("a >= 1")
    }

    /// The base pair `(x0, y0)` with least nonnegative `x0`.
    pub fn base_pair(&self) -> (&BigInt, &BigInt) {
        (&self.x0, &self.y0)
    }

    /// The solution pair for parameter `q`.
    pub fn pair(&self, q: i64) -> (BigInt, BigInt) {
        let q = BigInt::from(q);
        (&self.x0 + &self.b * &q, &self.y0 + &self.a * &q)
    }
}

/// Solves `c = b*y - a*x` over the integers.
///
/// Requires `gcd(a, b) | c`; the returned solution has the least nonnegative
/// `x0`, with `x = x0 (mod b)` and `y = y0 (mod a)`.
pub fn solve_linear(c: &BigInt, b: &BigInt, a: &BigInt) -> Result<DiophantineSolution> {
    let (g, s, _t) = extended_gcd(b, a)?;
    let (scale, rem) = c.div_rem(&g);
    if !rem.is_zero() {
        return Err(Error::NoIntegerSolutions {
            a: a.to_string(),
            b: b.to_string(),
            c: c.to_string(),
        });
    }
    // s*b + t*a = g  =>  b*(s*c/g) - a*(-t*c/g) = c
    let y_raw = s * &scale;
    let x_raw = (&y_raw * b - c) / a;
    debug_assert_eq!(b * &y_raw - a * &x_raw, *c);

    // Shift to the least nonnegative x0; y moves in lockstep.
    let b_qty = b.abs();
    let x0 = x_raw.mod_floor(&b_qty);
    let shift = (&x0 - &x_raw) / b;
    let y0 = y_raw + a * shift;
    debug_assert_eq!(b * &y0 - a * &x0, *c);

    Ok(DiophantineSolution {
        x0,
        y0,
        a: a.abs(),
        b: b_qty,
    })
}

/// Binomial coefficient `n! / (k! (n-k)!)` as an exact integer.
pub fn binomial(n: u32, k: u32) -> Result<BigInt> {
    if k > n {
        return Err(Error::InvalidBinomial {
            n: n as i64,
            k: k as i64,
        });
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Ok(acc)
}

/// Multinomial coefficient `(sum parts)! / prod(parts!)`.
pub fn multinomial(parts: &[u32]) -> Result<BigInt> {
    let mut total = 0u32;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p)?;
    }
    Ok(acc)
}

/// Sum of the first `n` terms of the geometric series with first term `a`
/// and ratio `r`: `a (1 - r^n) / (1 - r)`, exactly.
///
/// The degenerate ratio `r = 1` yields `n * a`.
pub fn geometric_sum(a: &BigRational, r: &BigRational, n: u32) -> BigRational {
    if r.is_one() {
        return a * BigRational::from_integer(BigInt::from(n));
    }
    let one = BigRational::one();
    let r_pow = pow_rational(r, n);
    a * (&one - r_pow) / (one - r.clone())
}

/// `r^n` for nonnegative `n`.
pub fn pow_rational(r: &BigRational, n: u32) -> BigRational {
    let num = r.numer().pow(n);
    let den = r.denom().pow(n);
    BigRational::new(num, den)
}

/// `base^exp` over big integers.
pub fn pow_bigint(base: u32, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(bi(n), bi(d))
    }

    #[test]
    fn extended_gcd_small() {
        assert_eq!(extended_gcd(&bi(4), &bi(3)).unwrap(), (bi(1), bi(1), bi(-1)));
        assert_eq!(extended_gcd(&bi(6), &bi(0)).unwrap(), (bi(6), bi(1), bi(0)));
        assert_eq!(extended_gcd(&bi(0), &bi(0)), Err(Error::UndefinedGcd));
    }

    #[test]
    fn extended_gcd_coprime_powers() {
        // powers of 2 and 3 are coprime; brute-force gcd as the oracle
        let brute = |mut a: i64, mut b: i64| {
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a.abs()
        };
        let (g, s, t) = extended_gcd(&bi(64), &bi(81)).unwrap();
        assert_eq!(g, bi(brute(64, 81)));
        assert_eq!(g, bi(1));
        assert_eq!(s * 64 + t * 81, bi(1));
    }

    #[test]
    fn solve_linear_table_cases() {
        // 1 = 4y - 3x  ->  x = 1 (mod 4), y = 1 (mod 3)
        let sol = solve_linear(&bi(1), &bi(4), &bi(3)).unwrap();
        assert_eq!(sol.x_class(), ResidueClass::of(1, 4));
        assert_eq!(sol.y_class(), ResidueClass::of(1, 3));

        // 1 = 4y - x  ->  x = 3 (mod 4), y = 1 (mod 1)
        let sol = solve_linear(&bi(1), &bi(4), &bi(1)).unwrap();
        assert_eq!(sol.x_class(), ResidueClass::of(3, 4));
        assert_eq!(sol.y_class(), ResidueClass::of(0, 1));
        assert_eq!(sol.base_pair().1, &bi(1));

        // 16 = 64y - 81x  ->  x = 48 (mod 64), y = 61 (mod 81)
        let sol = solve_linear(&bi(16), &bi(64), &bi(81)).unwrap();
        assert_eq!(sol.x_class(), ResidueClass::of(48, 64));
        assert_eq!(sol.y_class(), ResidueClass::of(61, 81));
    }

    #[test]
    fn solve_linear_no_solution() {
        assert!(matches!(
            solve_linear(&bi(1), &bi(4), &bi(2)),
            Err(Error::NoIntegerSolutions { .. })
        ));
    }

    #[test]
    fn solve_linear_pairs_satisfy_equation() {
        let (c, b, a) = (bi(16), bi(64), bi(81));
        let sol = solve_linear(&c, &b, &a).unwrap();
        for q in -3..=3 {
            let (x, y) = sol.pair(q);
            assert_eq!(&b * y - &a * x, c);
        }
    }

    #[test]
    fn solve_linear_representative_is_canonical() {
        // re-solving with x0 shifted by b yields the same class
        let sol = solve_linear(&bi(1), &bi(4), &bi(3)).unwrap();
        let (x0, y0) = sol.pair(5);
        let c = bi(4) * y0 - bi(3) * x0;
        let again = solve_linear(&c, &bi(4), &bi(3)).unwrap();
        assert_eq!(sol.x_class(), again.x_class());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(3, 2).unwrap(), bi(3));
        assert_eq!(binomial(7, 0).unwrap(), bi(1));
        assert!(binomial(3, 4).is_err());
    }

    #[test]
    fn binomial_matches_pascal_recurrence() {
        // independent oracle: build the triangle by addition only
        let rows = 20usize;
        let mut tri = vec![vec![BigInt::one()]];
        while tri.len() < rows {
            let prev = tri.last().unwrap();
            let mut row = vec![BigInt::one()];
            row.extend(prev.windows(2).map(|w| &w[0] + &w[1]));
            row.push(BigInt::one());
            tri.push(row);
        }
        assert_eq!(tri[18][9], bi(48620));
        for (n, row) in tri.iter().enumerate() {
            for (k, value) in row.iter().enumerate() {
                assert_eq!(&binomial(n as u32, k as u32).unwrap(), value);
            }
        }
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[2, 0, 1]).unwrap(), bi(3));
        assert_eq!(multinomial(&[1, 1, 1]).unwrap(), bi(6));
        assert_eq!(multinomial(&[5]).unwrap(), bi(1));
    }

    #[test]
    fn geometric_sum_values() {
        // first five terms of (1/4)(3/4)^(k-1): the L=6 cumulative
        assert_eq!(
            geometric_sum(&rat(1, 4), &rat(3, 4), 5),
            rat(781, 1024)
        );
        assert_eq!(geometric_sum(&rat(1, 4), &rat(3, 4), 1), rat(1, 4));
        // 19 terms of (1/16)(15/16)^(k-1) sum to 1 - (15/16)^19
        let s = geometric_sum(&rat(1, 16), &rat(15, 16), 19);
        let direct = BigRational::one() - pow_rational(&rat(15, 16), 19);
        assert_eq!(s, direct);
        // r = 1 degenerates to n*a
        assert_eq!(geometric_sum(&rat(1, 4), &rat(1, 1), 8), rat(2, 1));
    }

    #[test]
    fn residue_class_intersection() {
        let a = ResidueClass::of(1, 4);
        let b = ResidueClass::of(5, 8);
        assert_eq!(a.intersect(&b), Some(ResidueClass::of(5, 8)));
        let c = ResidueClass::of(3, 4);
        assert_eq!(c.intersect(&b), None);
        let d = ResidueClass::of(2, 3);
        assert_eq!(
            b.intersect(&d),
            Some(ResidueClass::of(5, 24))
        );
    }

    proptest! {
        #[test]
        fn prop_extended_gcd_bezout(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            prop_assume!(a != 0 || b != 0);
            let (g, s, t) = extended_gcd(&bi(a), &bi(b)).unwrap();
            prop_assert!(g > BigInt::zero());
            prop_assert_eq!(s * a + t * b, g.clone());
            prop_assert!((bi(a) % &g).is_zero() && (bi(b) % &g).is_zero());
        }

        #[test]
        fn prop_solve_linear_exact(c in -500i64..500, e2 in 0u32..8, e3 in 0u32..6) {
            let b = bi(2).pow(e2);
            let a = bi(3).pow(e3);
            let sol = solve_linear(&bi(c), &b, &a).unwrap();
            for q in -3..=3 {
                let (x, y) = sol.pair(q);
                prop_assert_eq!(&b * y - &a * x, bi(c));
            }
            let (x0, _) = sol.base_pair();
            prop_assert!(x0 >= &BigInt::zero() && x0 < &b);
        }

        #[test]
        fn prop_geometric_sum_matches_terms(num in 1i64..20, den in 1i64..20, n in 0u32..50) {
            prop_assume!(num != den);
            let a = rat(1, 4);
            let r = rat(num, den);
            let mut acc = BigRational::zero();
            let mut term = a.clone();
            for _ in 0..n {
                acc += term.clone();
                term *= r.clone();
            }
            prop_assert_eq!(geometric_sum(&a, &r, n), acc);
        }

        #[test]
        fn prop_multinomial_two_parts_is_binomial(n in 0u32..30, k in 0u32..30) {
            prop_assume!(k <= n);
            prop_assert_eq!(multinomial(&[k, n - k]).unwrap(), binomial(n, k).unwrap());
        }
    }
}
