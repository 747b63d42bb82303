//! Dedekind eta: exact expansions, eta-quotient literals, numeric products.
//!
//! `eta(m tau) = q^(m/24) prod_{n>=1} (1 - q^(m n))` expands by the pentagonal
//! number theorem, so the series part is sparse (about `sqrt` of the order
//! many terms). An [`EtaQuotient`] is a finite product `prod eta(m_j tau)^(r_j)`
//! with positive rational scales `m_j` and integer exponents `r_j`; it knows
//! its weight and leading exponent, expands exactly, evaluates numerically
//! with a certified error bound, and round-trips through the literal syntax
//! `eta(4t)^2*eta(8t)^2`.

use super::QSeries;
use crate::real::{Cf, Prec, Rf};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use num_integer::Integer;
use num_rational::BigRational;
use std::fmt;

/// Pentagonal-number expansion of `prod_{n>=1} (1 - q^(m n))`, exact below
/// integer exponent `order`; the grid is `1/m_den`.
fn pentagonal_part(m_num: i64, m_den: i64, order: i64) -> QSeries {
    assert!(m_num >= 1 && m_den >= 1);
    let trunc = order * m_den;
    let mut s = QSeries::zero(m_den, trunc);
    // Exponents m * k(3k-1)/2 for k in Z, sign (-1)^k.
    let mut k: i64 = 0;
    loop {
        let mut hit = false;
        for kk in [k, -k] {
            if kk == 0 && k != 0 {
                continue;
            }
            let j = kk * (3 * kk - 1) / 2;
            let key = m_num * j;
            if key < trunc {
                hit = true;
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                s = s.add(&QSeries::monomial(
                    BigRational::from_integer(BigInt::from(sign)),
                    key,
                    m_den,
                    order,
                ));
            }
            if k == 0 {
                break;
            }
        }
        if !hit && k > 0 {
            break;
        }
        k += 1;
    }
    s
}

/// Expansion of `eta(m tau)` with `m = m_num/m_den > 0`, exact below the
/// integer exponent `order`.
pub fn eta_expand(m_num: i64, m_den: i64, order: i64) -> QSeries {
    assert!(m_num >= 1 && m_den >= 1, "eta scale must be positive");
    let g = m_num.gcd(&m_den);
    let (m_num, m_den) = (m_num / g, m_den / g);
    // Series part to a relative order that still covers `order` after the
    // q^(m/24) shift (the shift only raises exponents).
    let part = pentagonal_part(m_num, m_den, order.max(1));
    part.shift(m_num, 24 * m_den).truncate_keys_to_order(order).normalize()
}

impl QSeries {
    /// Truncate so the series is exact below the integer exponent `order`.
    fn truncate_keys_to_order(&self, order: i64) -> QSeries {
        self.truncate_keys(order.saturating_mul(self.denom()))
    }
}

/// A finite product of eta factors `eta(m tau)^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    /// `(scale numerator, scale denominator, exponent)`, scales reduced,
    /// sorted by scale, exponents nonzero.
    factors: Vec<(i64, i64, i64)>,
}

impl EtaQuotient {
    /// Build from `(scale_num, scale_den, exponent)` triples; duplicate
    /// scales merge, zero exponents drop.
    pub fn new(factors: &[(i64, i64, i64)]) -> Result<EtaQuotient> {
        let mut merged: std::collections::BTreeMap<(i64, i64), i64> = Default::default();
        for &(n, d, r) in factors {
            if n < 1 || d < 1 {
                return Err(Error::Invalid(format!("eta scale {n}/{d} must be positive")));
            }
            let g = n.gcd(&d);
            *merged.entry((n / g, d / g)).or_insert(0) += r;
        }
        let mut factors: Vec<(i64, i64, i64)> = merged
            .into_iter()
            .filter(|(_, r)| *r != 0)
            .map(|((n, d), r)| (n, d, r))
            .collect();
        // Order by the value of the scale, not lexicographically.
        factors.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        Ok(EtaQuotient { factors })
    }

    /// Factors as `(scale_num, scale_den, exponent)` triples.
    pub fn factors(&self) -> &[(i64, i64, i64)] {
        &self.factors
    }

    /// Modular weight `sum r_j / 2`.
    pub fn weight(&self) -> BigRational {
        let s: i64 = self.factors.iter().map(|&(_, _, r)| r).sum();
        BigRational::new(BigInt::from(s), BigInt::from(2))
    }

    /// Leading exponent `sum m_j r_j / 24`.
    pub fn leading_exponent(&self) -> BigRational {
        let mut s = BigRational::zero();
        for &(n, d, r) in &self.factors {
            s += BigRational::new(BigInt::from(n * r), BigInt::from(24 * d));
        }
        s
    }

    /// Sum of `|r_j|`, the color count controlling coefficient growth.
    pub fn abs_exponent_sum(&self) -> i64 {
        self.factors.iter().map(|&(_, _, r)| r.abs()).sum()
    }

    /// Exact expansion below the integer exponent `order`.
    ///
    /// The pentagonal parts all lead with exponent 0, so denominators invert
    /// without losing order; the `q^(m/24)` prefactors are applied as one
    /// final shift.
    pub fn expand(&self, order: i64) -> Result<QSeries> {
        assert!(order >= 1);
        let lead = self.leading_exponent();
        // Relative order: enough that after shifting by `lead` (which may be
        // negative) everything below `order` is still exact.
        let lead_floor = lead.floor().to_integer();
        let lead_i64: i64 = (&lead_floor).try_into().map_err(|_| {
            Error::Invalid("leading exponent out of range".into())
        })?;
        let rel_order = order - lead_i64.min(0) + 1;
        let mut acc = QSeries::one(rel_order);
        for &(n, d, r) in &self.factors {
            let part = pentagonal_part(n, d, rel_order);
            let powed = if r >= 0 { part.pow(r)? } else { part.invert()?.pow(-r)? };
            acc = acc.mul(&powed);
        }
        // Shift by the total prefactor exponent sum m_j r_j / 24.
        let num: &BigInt = lead.numer();
        let den: &BigInt = lead.denom();
        let num_i: i64 = num.try_into().map_err(|_| Error::Invalid("exponent overflow".into()))?;
        let den_i: i64 = den.try_into().map_err(|_| Error::Invalid("exponent overflow".into()))?;
        Ok(acc.shift(num_i, den_i).truncate_keys_to_order(order).normalize())
    }

    /// Numeric value at `tau` in the upper half-plane, with a certified
    /// relative error propagated from each truncated product.
    pub fn evaluate(&self, tau: &Cf, prec: Prec) -> Result<(Cf, Rf)> {
        let p = prec.widen(32);
        if !matches!(tau.im.signum(), Some(1)) {
            return Err(Error::Domain("tau must lie in the upper half-plane".into()));
        }
        let mut value = Cf::one(p);
        let mut rel_err = Rf::zero(p);
        for &(n, d, r) in &self.factors {
            let scale_num = Rf::frac(n, d, p);
            let (v, b) = eta_factor(tau, &scale_num, p)?;
            let powed = if r >= 0 {
                v.powi(r as u64)
            } else {
                (&Cf::one(p) / &v).powi((-r) as u64)
            };
            value = &value * &powed;
            rel_err = rel_err + Rf::int(r.abs(), p) * b;
        }
        // exp(e) - 1 <= 2e for e <= 1/2; refuse anything cruder.
        if !rel_err.lt(&Rf::frac(1, 2, p)) {
            return Err(Error::InsufficientTruncation(
                "eta product tail bound too large at this point".into(),
            ));
        }
        let err = &value.abs() * &(&rel_err + &rel_err)
            + &value.abs() * &Rf::pow2(-(prec.bits() as i32) - 6, p);
        Ok((value, err))
    }

    /// Literal form, e.g. `eta(4t)^2*eta(8t)^2`.
    pub fn literal(&self) -> String {
        format!("{self}")
    }

    /// Parse the literal grammar `eta(SCALE t)^R [* ...]`; errors carry the
    /// byte offset of the first unusable character.
    pub fn parse(input: &str) -> Result<EtaQuotient> {
        let b = input.as_bytes();
        let mut pos = 0usize;
        let mut factors: Vec<(i64, i64, i64)> = Vec::new();
        let err = |pos: usize, msg: &str| Error::Parse { offset: pos, msg: msg.into() };
        let skip_ws = |pos: &mut usize| {
            while *pos < b.len() && b[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let parse_int = |pos: &mut usize, what: &str| -> Result<i64> {
            let start = *pos;
            let neg = *pos < b.len() && b[*pos] == b'-';
            if neg {
                *pos += 1;
            }
            let ds = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == ds {
                return Err(err(start, &format!("expected {what}")));
            }
            input[start..*pos]
                .parse::<i64>()
                .map_err(|_| err(start, &format!("{what} out of range")))
        };
        loop {
            skip_ws(&mut pos);
            if !input[pos..].starts_with("eta(") {
                return Err(err(pos, "expected `eta(`"));
            }
            pos += 4;
            let num = parse_int(&mut pos, "a positive integer scale")?;
            let mut den = 1i64;
            if pos < b.len() && b[pos] == b'/' {
                pos += 1;
                den = parse_int(&mut pos, "a positive denominator")?;
            }
            if num < 1 || den < 1 {
                return Err(err(pos, "eta scale must be positive"));
            }
            if pos >= b.len() || b[pos] != b't' {
                return Err(err(pos, "expected `t`"));
            }
            pos += 1;
            if pos >= b.len() || b[pos] != b')' {
                return Err(err(pos, "expected `)`"));
            }
            pos += 1;
            let mut r = 1i64;
            if pos < b.len() && b[pos] == b'^' {
                pos += 1;
                r = parse_int(&mut pos, "an integer exponent")?;
            }
            factors.push((num, den, r));
            skip_ws(&mut pos);
            if pos >= b.len() {
                break;
            }
            if b[pos] != b'*' {
                return Err(err(pos, "expected `*` or end of input"));
            }
            pos += 1;
        }
        EtaQuotient::new(&factors)
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(n, d, r)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if d == 1 {
                write!(f, "eta({n}t)")?;
            } else {
                write!(f, "eta({n}/{d}t)")?;
            }
            if r != 1 {
                write!(f, "^{r}")?;
            }
        }
        Ok(())
    }
}

/// One eta value `eta(m tau)` as a truncated product, returning the value and
/// a bound on `|log|` of the dropped tail.
fn eta_factor(tau: &Cf, m: &Rf, p: Prec) -> Result<(Cf, Rf)> {
    let two_pi = Rf::pi(p) + Rf::pi(p);
    let y = &tau.im * m;
    let x = &tau.re * m;
    // w = e^(2 pi i m tau), |w| = e^(-2 pi m Im tau).
    let wabs = (-&(&y * &two_pi)).exp();
    let w = Cf::cis(&(&x * &two_pi)).scale(&wabs);
    let one = Rf::int(1, p);
    if !wabs.lt(&one) {
        return Err(Error::Domain("eta product requires |q| < 1".into()));
    }
    // Product cutoff: |w|^(N+1) below 2^-(bits+16) * (1 - |w|).
    let eps = &Rf::pow2(-(p.bits() as i32) - 16, p) * &(&one - &wabs);
    let mut n = 1i64;
    let mut wn = w.clone();
    let mut wn_abs = wabs.clone();
    let mut prod = Cf::one(p);
    loop {
        prod = &prod * &(&Cf::one(p) - &wn);
        wn = &wn * &w;
        wn_abs = &wn_abs * &wabs;
        n += 1;
        if wn_abs.lt(&eps) {
            break;
        }
        if n > 4_000_000 {
            return Err(Error::InsufficientTruncation(
                "eta product does not reach the target accuracy".into(),
            ));
        }
    }
    // Tail bound: sum_{k>n} |w|^k / (1 - |w|) for |log prod_{k>n}(1-w^k)|.
    let tail = &(&wn_abs / &(&one - &wabs)) / &(&one - &wabs);
    // Prefactor q^(m/24) = e^(2 pi i m tau / 24).
    let pref_abs = (-&(&(&y * &two_pi) / &Rf::int(24, p))).exp();
    let pref = Cf::cis(&(&(&x * &two_pi) / &Rf::int(24, p))).scale(&pref_abs);
    Ok((&pref * &prod, tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::TailBound;
    use num_traits::FromPrimitive;

    fn r(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    /// Brute-force product of `(1 - q^n)` up to `n = order`, no pentagonal
    /// shortcut, as the oracle for the sparse expansion.
    fn naive_euler_product(order: i64) -> QSeries {
        let mut acc = QSeries::one(order);
        for n in 1..=order {
            let f = QSeries::monomial(r(1), 0, 1, order)
                .add(&QSeries::monomial(r(-1), n, 1, order));
            acc = acc.mul(&f);
        }
        acc
    }

    #[test]
    fn pentagonal_expansion_matches_naive_product() {
        let fast = pentagonal_part(1, 1, 13);
        let slow = naive_euler_product(13);
        assert!(fast.agrees_with(&slow));
        // Frozen low-order pattern of the Euler product.
        let expect: Vec<(i64, i64)> =
            vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)];
        let got: Vec<(i64, i64)> = fast
            .terms()
            .map(|(n, c)| (n, i64::try_from(c.to_integer()).unwrap()))
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn eta_carries_the_q_one_24th_prefactor() {
        let e = eta_expand(1, 1, 3);
        assert_eq!(e.denom(), 24);
        assert_eq!(e.coeff(1, 24), r(1));
        assert_eq!(e.coeff(25, 24), r(-1));
        assert_eq!(e.coeff(49, 24), r(-1));
    }

    #[test]
    fn scaled_eta_lands_on_the_right_grid() {
        // eta(4 tau): leading exponent 4/24 = 1/6.
        let e = eta_expand(4, 1, 4);
        assert_eq!(e.denom(), 6);
        assert_eq!(e.coeff(1, 6), r(1));
        // next exponent 1/6 + 4 = 25/6
        let e10 = eta_expand(4, 1, 10);
        assert_eq!(e10.coeff(25, 6), r(-1));
    }

    #[test]
    fn weight_and_leading_exponent_of_known_forms() {
        // eta(6t)^4: weight 2, leading exponent 1.
        let f36 = EtaQuotient::new(&[(6, 1, 4)]).unwrap();
        assert_eq!(f36.weight(), r(2));
        assert_eq!(f36.leading_exponent(), r(1));
        // eta(4t)^2 eta(8t)^2: weight 2, leading exponent 1.
        let f32q = EtaQuotient::new(&[(4, 1, 2), (8, 1, 2)]).unwrap();
        assert_eq!(f32q.weight(), r(2));
        assert_eq!(f32q.leading_exponent(), r(1));
    }

    #[test]
    fn quotient_expansion_matches_direct_division() {
        // eta(2t) / eta(t)^2, a quotient with a negative factor.
        let quo = EtaQuotient::new(&[(2, 1, 1), (1, 1, -2)]).unwrap();
        let fast = quo.expand(8).unwrap();
        let slow = eta_expand(2, 1, 12)
            .div(&eta_expand(1, 1, 12).pow(2).unwrap())
            .unwrap();
        assert!(fast.agrees_with(&slow));
        // Leading exponent 2/24 - 2/24 = 0; constant term 1.
        assert_eq!(fast.coeff(0, 1), r(1));
    }

    #[test]
    fn known_form_expansions_start_correctly() {
        // eta(6t)^4 = q - 4q^7 + 2q^13 + 8q^19 - 5q^25 - ...
        let f36 = EtaQuotient::new(&[(6, 1, 4)]).unwrap().expand(26).unwrap();
        assert_eq!(f36.denom(), 1);
        for (n, c) in [(1, 1), (7, -4), (13, 2), (19, 8), (25, -5)] {
            assert_eq!(f36.coeff(n, 1), r(c), "coefficient at q^{n}");
        }
        // eta(4t)^2 eta(8t)^2 = q - 2q^5 - 3q^9 + 6q^13 + 2q^17 - q^25 - ...
        let f32q = EtaQuotient::new(&[(4, 1, 2), (8, 1, 2)]).unwrap().expand(26).unwrap();
        for (n, c) in [(1, 1), (5, -2), (9, -3), (13, 6), (17, 2), (25, -1)] {
            assert_eq!(f32q.coeff(n, 1), r(c), "coefficient at q^{n}");
        }
    }

    #[test]
    fn literal_roundtrip() {
        let f = EtaQuotient::new(&[(4, 1, 2), (8, 1, 2)]).unwrap();
        assert_eq!(f.literal(), "eta(4t)^2*eta(8t)^2");
        assert_eq!(EtaQuotient::parse("eta(4t)^2*eta(8t)^2").unwrap(), f);
        let g = EtaQuotient::new(&[(1, 2, 2), (1, 1, -3)]).unwrap();
        assert_eq!(g.literal(), "eta(1/2t)^2*eta(1t)^-3");
        assert_eq!(EtaQuotient::parse(&g.literal()).unwrap(), g);
    }

    #[test]
    fn zero_exponent_collapses_to_one() {
        let f = EtaQuotient::parse("eta(1t)^0").unwrap();
        assert_eq!(f.literal(), "1");
        let s = f.expand(5).unwrap();
        assert!(s.agrees_with(&QSeries::one(5)));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match EtaQuotient::parse("eta(") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match EtaQuotient::parse("eta(0t)") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        match EtaQuotient::parse("eta(4t)^2 % eta(8t)") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn eta_value_at_i_matches_gamma_closed_form() {
        // eta(i) = Gamma(1/4) / (2 pi^(3/4)), with Gamma(1/4) frozen.
        let p = Prec::from_digits(40);
        let f = EtaQuotient::new(&[(1, 1, 1)]).unwrap();
        let tau = Cf::new(Rf::zero(p), Rf::int(1, p));
        let (v, err) = f.evaluate(&tau, p).unwrap();
        let g14 = Rf::rat(
            &"36256099082219083119306851558676720029951676828800654674333779995569\
              /10000000000000000000000000000000000000000000000000000000000000000000"
                .parse::<BigRational>()
                .unwrap(),
            p,
        );
        let pi = Rf::pi(p);
        let expect = &g14 / &(Rf::int(2, p) * pi.pow_rat(3, 4));
        let diff = (&v.re - &expect).abs();
        let tol = Rf::pow2(-(p.bits() as i32) + 30, p);
        assert!(diff.lt(&tol), "difference {}", diff.fmt_decimal(8));
        assert!(err.lt(&tol));
        assert!(v.im.abs().lt(&err));
    }

    #[test]
    fn eta_functional_equation_at_sample_points() {
        // eta(i/t) = sqrt(t) eta(it) at t in {1/2, 9/10, 23/10}.
        let p = Prec::from_digits(40);
        let f = EtaQuotient::new(&[(1, 1, 1)]).unwrap();
        for (tn, td) in [(1i64, 2i64), (9, 10), (23, 10)] {
            let t = Rf::frac(tn, td, p);
            let tau1 = Cf::new(Rf::zero(p), t.clone());
            let tau2 = Cf::new(Rf::zero(p), t.recip());
            let (v1, e1) = f.evaluate(&tau1, p).unwrap();
            let (v2, e2) = f.evaluate(&tau2, p).unwrap();
            let rhs = &v1.re * &t.sqrt();
            let diff = (&v2.re - &rhs).abs();
            let tol = &(&e1 + &e2) + &Rf::pow2(-(p.bits() as i32) + 20, p);
            assert!(diff.lt(&tol), "t = {tn}/{td}: diff {}", diff.fmt_decimal(8));
        }
    }

    #[test]
    fn series_evaluation_agrees_with_product_evaluation() {
        // The exact expansion of eta(2t)^3 eta(6t)^3, evaluated with the
        // partition-style tail bound, against the certified infinite product.
        let p = Prec::from_digits(30);
        let h3 = EtaQuotient::new(&[(2, 1, 3), (6, 1, 3)]).unwrap();
        let series = h3.expand(40).unwrap();
        let tau = Cf::new(Rf::zero(p), Rf::frac(4, 5, p));
        let (sv, se) = series
            .evaluate(&tau, p, TailBound::Poly { c: r(1000), g: 6 })
            .unwrap();
        let (pv, pe) = h3.evaluate(&tau, p).unwrap();
        let diff = (&sv.re - &pv.re).abs();
        let tol = &se + &pe;
        assert!(diff.lt(&tol), "diff {} tol {}", diff.fmt_decimal(8), tol.fmt_decimal(8));
    }
}
