//! Exact truncated q-series arithmetic and the modular-form expansion catalogue.
//!
//! A [`QSeries`] is a finite sum of terms `c * q^(n/d)` with exact rational
//! coefficients, a global exponent denominator `d`, and a truncation index
//! `t`: every exponent `n/d` with `n < t` that is absent from the map has
//! coefficient exactly zero, and nothing is claimed at or above `t`.
//! Arithmetic tracks how truncation degrades (products lose accuracy by the
//! leading exponents of the factors, inverses by twice theirs), so identity
//! checks over this type are proofs of coefficient equality up to the stated
//! order.
//!
//! Submodules build the expansion catalogue on top of this core:
//! [`eta`] (Dedekind eta and eta quotients), [`theta`] (Jacobi thetas and the
//! modular lambda), [`cubic`] (the cubic theta triple), and [`eisenstein`]
//! (the weight-k Eisenstein family, phi, and the identity ladder relating
//! them).

pub mod cubic;
pub mod eta;
pub mod eisenstein;
pub mod theta;

use crate::real::{poly_tail_bound, Cf, Prec, Rf};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use cubic::{cubic_identities_mismatch, cubic_theta_expand, CubicKind};
pub use eta::{eta_expand, EtaQuotient};
pub use eisenstein::{
    e2_expand, e2_star_value, eisenstein_expand, phi_eta_summands_mismatch,
    phi_expand, phi_factorization_mismatch, sebbar_identity_check, t_expand,
    EisensteinExpansion, EisensteinSpec, SebbarMismatch,
};
pub use theta::{
    e2_theta_bridge_mismatch, jacobi_quartic_mismatch, lambda_complement_mismatch,
    lambda_derivative_check, lambda_expand, theta_eta_mismatch, theta_expand, theta_value,
    ThetaKind,
};

/// Truncated formal series in `q^(1/d)` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    denom: i64,
    trunc: i64,
    coeffs: BTreeMap<i64, BigRational>,
}

impl QSeries {
    /// Zero series on the `1/denom` grid, exact below `trunc/denom`.
    pub fn zero(denom: i64, trunc: i64) -> QSeries {
        assert!(denom >= 1, "exponent denominator must be positive");
        QSeries { denom, trunc, coeffs: BTreeMap::new() }
    }

    /// The constant 1 on the integer grid, exact below `order`.
    pub fn one(order: i64) -> QSeries {
        QSeries::monomial(BigRational::one(), 0, 1, order)
    }

    /// Single term `c * q^(num/den)`, exact below `order` (an integer exponent).
    pub fn monomial(c: BigRational, num: i64, den: i64, order: i64) -> QSeries {
        assert!(den >= 1);
        let mut coeffs = BTreeMap::new();
        let trunc = order
            .checked_mul(den)
            .expect("truncation overflow");
        if !c.is_zero() && num < trunc {
            coeffs.insert(num, c);
        }
        QSeries { denom: den, trunc, coeffs }
    }

    /// Exponent denominator `d`.
    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Truncation index: coefficients are exact for exponents `n/d` with `n < trunc`.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Truncation as a rational exponent bound.
    pub fn trunc_exponent(&self) -> BigRational {
        BigRational::new(BigInt::from(self.trunc), BigInt::from(self.denom))
    }

    /// Nonzero terms as `(n, c)` pairs with exponent `n/d`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// Number of stored nonzero terms.
    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `q^(num/den)`; exponent must lie below the truncation.
    pub fn coeff(&self, num: i64, den: i64) -> BigRational {
        assert!(den >= 1);
        // Bring num/den onto the 1/d grid; off-grid exponents hold coefficient 0.
        let g = gcd(self.denom, den);
        if (self.denom / g).checked_mul(num).is_none() {
            panic!("exponent overflow");
        }
        let scaled = num * (self.denom / g);
        if scaled % (den / g) != 0 {
            assert!(
                BigRational::new(num.into(), den.into()) < self.trunc_exponent(),
                "coefficient requested at or beyond truncation"
            );
            return BigRational::zero();
        }
        let key = scaled / (den / g);
        assert!(key < self.trunc, "coefficient requested at or beyond truncation");
        self.coeffs.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Leading term `(n, c)` if any nonzero coefficient is known.
    pub fn leading(&self) -> Option<(i64, &BigRational)> {
        self.coeffs.iter().next().map(|(n, c)| (*n, c))
    }

    /// Lower bound for the order of the series: the leading exponent when a
    /// nonzero term is known, otherwise the truncation index.
    fn min_exp_lb(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.trunc)
    }

    /// True when no nonzero coefficient is known below the truncation.
    pub fn is_zero_series(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Rescale the exponent grid to a multiple of the current denominator.
    pub fn rescale_denom(&self, new_denom: i64) -> QSeries {
        assert!(new_denom >= self.denom && new_denom % self.denom == 0);
        let f = new_denom / self.denom;
        if f == 1 {
            return self.clone();
        }
        QSeries {
            denom: new_denom,
            trunc: self.trunc.checked_mul(f).expect("truncation overflow"),
            coeffs: self.coeffs.iter().map(|(n, c)| (n * f, c.clone())).collect(),
        }
    }

    /// Reduce the denominator by the gcd of the grid actually used.
    pub fn normalize(&self) -> QSeries {
        let mut g = self.denom;
        for n in self.coeffs.keys() {
            g = gcd(g, n.abs());
            if g == 1 {
                return self.clone();
            }
        }
        let trunc = if self.trunc >= 0 {
            (self.trunc + g - 1).div_euclid(g)
        } else {
            self.trunc.div_euclid(g)
        };
        QSeries {
            denom: self.denom / g,
            trunc,
            coeffs: self.coeffs.iter().map(|(n, c)| (n / g, c.clone())).collect(),
        }
    }

    /// Drop information at and above exponent `new_trunc/denom`.
    pub fn truncate_keys(&self, new_trunc: i64) -> QSeries {
        let trunc = new_trunc.min(self.trunc);
        QSeries {
            denom: self.denom,
            trunc,
            coeffs: self.coeffs.iter().filter(|(n, _)| **n < trunc).map(|(n, c)| (*n, c.clone())).collect(),
        }
    }

    fn common_grid(&self, other: &QSeries) -> (QSeries, QSeries) {
        let d = lcm(self.denom, other.denom);
        (self.rescale_denom(d), other.rescale_denom(d))
    }

    /// Sum; exact below the smaller of the two truncations.
    pub fn add(&self, other: &QSeries) -> QSeries {
        let (a, b) = self.common_grid(other);
        let trunc = a.trunc.min(b.trunc);
        let mut coeffs = a.coeffs;
        for (n, c) in b.coeffs {
            let e = coeffs.entry(n).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                coeffs.remove(&n);
            }
        }
        coeffs.retain(|n, _| *n < trunc);
        QSeries { denom: a.denom, trunc, coeffs }
    }

    /// Difference.
    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> QSeries {
        QSeries {
            denom: self.denom,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(n, c)| (*n, -c.clone())).collect(),
        }
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, s: &BigRational) -> QSeries {
        if s.is_zero() {
            return QSeries::zero(self.denom, self.trunc);
        }
        QSeries {
            denom: self.denom,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(n, c)| (*n, c * s)).collect(),
        }
    }

    /// Multiply by the monomial `q^(num/den)` (shifts exponents and truncation).
    pub fn shift(&self, num: i64, den: i64) -> QSeries {
        let g = gcd(self.denom, den);
        let d = self.denom * (den / g);
        let a = self.rescale_denom(d);
        let k = num * (d / den);
        QSeries {
            denom: d,
            trunc: a.trunc + k,
            coeffs: a.coeffs.into_iter().map(|(n, c)| (n + k, c)).collect(),
        }
    }

    /// Product; truncation follows `min(t_a + ord(b), t_b + ord(a))`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let (a, b) = self.common_grid(other);
        let trunc = (a.trunc + b.min_exp_lb()).min(b.trunc + a.min_exp_lb());
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (i, ci) in &a.coeffs {
            for (j, cj) in &b.coeffs {
                let k = i + j;
                if k >= trunc {
                    // Keys ascend within each factor, so later j only grow.
                    break;
                }
                let e = coeffs.entry(k).or_insert_with(BigRational::zero);
                *e += ci * cj;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        QSeries { denom: a.denom, trunc, coeffs }
    }

    /// Multiplicative inverse; needs a known leading term. For a series with
    /// leading exponent `alpha` and truncation `t`, the inverse is exact
    /// below `t - 2 alpha`.
    pub fn invert(&self) -> Result<QSeries> {
        let (alpha, c0) = match self.leading() {
            Some((n, c)) => (n, c.clone()),
            None => {
                return Err(Error::InsufficientTruncation(
                    "cannot invert a series with no known nonzero term".into(),
                ))
            }
        };
        let t_rel = self.trunc - alpha;
        if t_rel <= 0 {
            return Err(Error::InsufficientTruncation(
                "no terms survive inversion at this truncation".into(),
            ));
        }
        // Normalized tail g with u = 1 + g, where self = c0 q^alpha u.
        let g: Vec<(i64, BigRational)> = self
            .coeffs
            .iter()
            .filter(|(n, _)| **n > alpha)
            .map(|(n, c)| (n - alpha, c / &c0))
            .collect();
        let n_rel = t_rel as usize;
        let mut h = vec![BigRational::zero(); n_rel];
        h[0] = BigRational::one();
        for n in 1..n_rel {
            let mut s = BigRational::zero();
            for (j, gj) in &g {
                let j = *j as usize;
                if j > n {
                    break;
                }
                if !h[n - j].is_zero() {
                    s += gj * &h[n - j];
                }
            }
            h[n] = -s;
        }
        let trunc = self.trunc - 2 * alpha;
        let coeffs = h
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n as i64 - alpha, c / &c0))
            .filter(|(n, _)| *n < trunc)
            .collect();
        Ok(QSeries { denom: self.denom, trunc, coeffs })
    }

    /// Quotient `self / other`.
    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        Ok(self.mul(&other.invert()?))
    }

    /// Integer power (negative powers go through the inverse).
    pub fn pow(&self, k: i64) -> Result<QSeries> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        if k == 0 {
            return Ok(QSeries::monomial(BigRational::one(), 0, 1, self.trunc.div_euclid(self.denom).max(1)));
        }
        let mut base = self.clone();
        let mut n = k as u64;
        let mut acc: Option<QSeries> = None;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.expect("k >= 1"))
    }

    /// Substitute `q -> q^(num/den)` for a positive rational exponent scale.
    pub fn substitute(&self, num: i64, den: i64) -> QSeries {
        assert!(num >= 1 && den >= 1, "substitution scale must be positive");
        let d = self.denom.checked_mul(den).expect("denominator overflow");
        let s = QSeries {
            denom: d,
            trunc: self.trunc.checked_mul(num).expect("truncation overflow"),
            coeffs: self.coeffs.iter().map(|(n, c)| (n * num, c.clone())).collect(),
        };
        s.normalize()
    }

    /// Euler operator `q d/dq`: multiplies each coefficient by its exponent.
    pub fn derivative_qddq(&self) -> QSeries {
        QSeries {
            denom: self.denom,
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (*n, c * BigRational::new(BigInt::from(*n), BigInt::from(self.denom))))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// First exponent (as `(num, den)`) where the two series disagree, up to
    /// the smaller truncation; `None` when they agree on that range.
    pub fn first_difference(&self, other: &QSeries) -> Option<(i64, i64)> {
        let d = self.sub(other);
        d.leading().map(|(n, _)| {
            let g = gcd(n.abs().max(1), d.denom);
            (n / g, d.denom / g)
        })
    }

    /// True when the series agree below the smaller truncation.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        self.first_difference(other).is_none()
    }

    /// Numeric evaluation at `tau` in the upper half-plane, with a certified
    /// truncation-tail bound.
    ///
    /// The series value is `sum c_n w^n` with `w = e^(2 pi i tau / d)`. The
    /// tail above the truncation is bounded using `bound`, which must
    /// dominate `|c_n|` for all `n >= trunc`; the heuristic default scales
    /// the largest computed coefficient by a cubic envelope and is suitable
    /// for well-separated points, not for adversarial ones.
    pub fn evaluate(&self, tau: &Cf, prec: Prec, bound: TailBound) -> Result<(Cf, Rf)> {
        let p = prec.widen(32);
        if !matches!(tau.im.signum(), Some(1)) {
            return Err(Error::Domain("tau must lie in the upper half-plane".into()));
        }
        let two_pi_over_d = &(Rf::pi(p) + Rf::pi(p)) / &Rf::int(self.denom, p);
        // w = e^(2 pi i tau / d); |w| = e^(-2 pi Im tau / d) < 1.
        let wabs = (-&(&tau.im * &two_pi_over_d)).exp();
        let warg = &tau.re * &two_pi_over_d;
        let w = Cf::cis(&warg).scale(&wabs);
        let (c_bound, g_bound) = match bound {
            TailBound::Poly { ref c, g } => (Rf::rat(c, p), g),
            TailBound::Heuristic => {
                let mut m = BigRational::zero();
                for c in self.coeffs.values() {
                    let a = c.abs();
                    if a > m {
                        m = a;
                    }
                }
                if m.is_zero() {
                    m = BigRational::one();
                }
                (Rf::rat(&(m * BigRational::from_integer(4.into())), p), 3)
            }
        };
        let tail = poly_tail_bound(&c_bound, g_bound, &wabs, self.trunc.max(0)).ok_or_else(|| {
            Error::InsufficientTruncation(format!(
                "tail bound does not converge at truncation {}/{}",
                self.trunc, self.denom
            ))
        })?;
        // Horner-style evaluation over ascending keys with incremental powers.
        let mut acc = Cf::zero(p);
        let mut last_n: Option<i64> = None;
        for (n, c) in self.coeffs.iter().rev() {
            // Descending: acc = acc * w^(gap) + c
            let gap = match last_n {
                None => 0,
                Some(m) => m - n,
            };
            if gap > 0 {
                let wpow = w.powi(gap as u64);
                acc = &acc * &wpow;
            }
            acc = &acc + &Cf::real(Rf::rat(c, p));
            last_n = Some(*n);
        }
        if let Some(n0) = last_n {
            let lead = if n0 >= 0 {
                w.powi(n0 as u64)
            } else {
                let inv = &Cf::one(p) / &w;
                inv.powi((-n0) as u64)
            };
            acc = &acc * &lead;
        }
        // Rounding slop: generous ulp allowance on top of the certified tail.
        let slop = &acc.abs() * &Rf::pow2(-(prec.bits() as i32) - 8, p);
        let err = &tail + &slop;
        Ok((acc, err))
    }

    /// Serialize to a JSON value (coefficients as exact rational strings).
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(n, c)| serde_json::json!([n, c.to_string()]))
            .collect();
        serde_json::json!({
            "denominator": self.denom,
            "truncation": self.trunc,
            "terms": terms,
        })
    }

    /// Deserialize from the [`QSeries::to_json`] shape.
    pub fn from_json(v: &serde_json::Value) -> Result<QSeries> {
        let denom = v
            .get("denominator")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Invalid("missing denominator".into()))?;
        let trunc = v
            .get("truncation")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Invalid("missing truncation".into()))?;
        if denom < 1 {
            return Err(Error::Invalid("denominator must be positive".into()));
        }
        let mut coeffs = BTreeMap::new();
        let terms = v
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Invalid("missing terms".into()))?;
        for t in terms {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                Error::Invalid("term must be an [exponent, coefficient] pair".into())
            })?;
            let n = pair[0]
                .as_i64()
                .ok_or_else(|| Error::Invalid("term exponent must be an integer".into()))?;
            let cs = pair[1]
                .as_str()
                .ok_or_else(|| Error::Invalid("term coefficient must be a string".into()))?;
            let c = BigRational::from_str(cs)
                .map_err(|e| Error::Invalid(format!("bad coefficient {cs:?}: {e}")))?;
            if n < trunc && !c.is_zero() {
                coeffs.insert(n, c);
            }
        }
        Ok(QSeries { denom, trunc, coeffs })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "O(q^{})", self.trunc_exponent());
        }
        let mut first = true;
        for (n, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let g = gcd(n.abs().max(1), self.denom);
            let (en, ed) = (n / g, self.denom / g);
            if *n == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if ed == 1 {
                    if en == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{en}")?;
                    }
                } else {
                    write!(f, "q^({en}/{ed})")?;
                }
            }
        }
        write!(f, " + O(q^{})", self.trunc_exponent())
    }
}

/// Tail-growth model for [`QSeries::evaluate`].
#[derive(Clone, Debug)]
pub enum TailBound {
    /// `|c_n| <= c (1+n)^g` for all `n` at or above the truncation.
    Poly {
        /// Scale of the bound.
        c: BigRational,
        /// Polynomial degree of the bound.
        g: u32,
    },
    /// Scale the largest computed coefficient by a cubic envelope.
    Heuristic,
}

fn gcd(a: i64, b: i64) -> i64 {
    a.abs().gcd(&b.abs()).max(1)
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    /// Brute-force polynomial product on dense vectors, as an independent
    /// check of the sparse convolution.
    fn naive_mul(a: &[(i64, i64)], b: &[(i64, i64)], cutoff: i64) -> Vec<(i64, i64)> {
        let mut out = std::collections::BTreeMap::new();
        for (i, ci) in a {
            for (j, cj) in b {
                if i + j < cutoff {
                    *out.entry(i + j).or_insert(0) += ci * cj;
                }
            }
        }
        out.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    fn from_pairs(pairs: &[(i64, i64)], denom: i64, trunc: i64) -> QSeries {
        let mut s = QSeries::zero(denom, trunc);
        for (n, c) in pairs {
            s = s.add(&QSeries {
                denom,
                trunc,
                coeffs: [(*n, r(*c))].into_iter().collect(),
            });
        }
        s
    }

    #[test]
    fn product_matches_naive_convolution() {
        let a = [(0, 1), (1, -3), (4, 2)];
        let b = [(0, 2), (2, 5), (3, -1)];
        let sa = from_pairs(&a, 1, 10);
        let sb = from_pairs(&b, 1, 10);
        let prod = sa.mul(&sb);
        assert_eq!(prod.trunc(), 10); // both have leading exponent 0
        let expect = naive_mul(&a, &b, 10);
        let got: Vec<(i64, i64)> = prod
            .terms()
            .map(|(n, c)| (n, c.to_integer().try_into().unwrap()))
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn truncation_tracks_leading_exponents() {
        // a = q^2 * (exact below 10), b = q^3 * (exact below 7)
        let a = QSeries::monomial(r(1), 2, 1, 10);
        let b = QSeries::monomial(r(1), 3, 1, 7);
        let prod = a.mul(&b);
        assert_eq!(prod.trunc(), 9); // min(10 + 3, 7 + 2)
        assert_eq!(prod.coeff(5, 1), r(1));
    }

    #[test]
    fn inverse_of_one_minus_q_is_geometric() {
        // 1 - q, exact below 50
        let f = from_pairs(&[(0, 1), (1, -1)], 1, 50);
        let inv = f.invert().unwrap();
        assert_eq!(inv.trunc(), 50);
        for n in 0..50 {
            assert_eq!(inv.coeff(n, 1), r(1), "geometric coefficient at {n}");
        }
    }

    #[test]
    fn inverse_loses_twice_the_leading_exponent() {
        // f = q^3 (1 - q), exact below 20; 1/f exact below 20 - 6 = 14.
        let f = from_pairs(&[(3, 1), (4, -1)], 1, 20);
        let inv = f.invert().unwrap();
        assert_eq!(inv.trunc(), 14);
        assert_eq!(inv.coeff(-3, 1), r(1));
        assert_eq!(inv.coeff(0, 1), r(1));
        let prod = f.mul(&inv);
        assert!(prod.agrees_with(&QSeries::one(5)));
    }

    #[test]
    fn substitution_moves_to_finer_grid() {
        let f = from_pairs(&[(1, 16), (2, -128)], 2, 8); // 16 q^(1/2) - 128 q
        let g = f.substitute(1, 3); // q -> q^(1/3)
        assert_eq!(g.denom(), 6);
        assert_eq!(g.coeff(1, 6), r(16));
        assert_eq!(g.coeff(2, 6), r(-128));
        let h = f.substitute(2, 1); // q -> q^2: exponents double, grid coarsens to 1/1 after normalize
        assert_eq!(h.coeff(1, 1), r(16));
        assert_eq!(h.coeff(2, 1), r(-128));
    }

    #[test]
    fn euler_operator_multiplies_by_exponent() {
        let f = from_pairs(&[(1, 7), (4, 5)], 2, 10); // 7 q^(1/2) + 5 q^2
        let d = f.derivative_qddq();
        assert_eq!(d.coeff(1, 2), BigRational::new(7.into(), 2.into()));
        assert_eq!(d.coeff(2, 1), r(10));
    }

    #[test]
    fn json_roundtrip_preserves_everything() {
        let f = from_pairs(&[(-2, 1), (0, 744), (1, 196884)], 1, 5);
        let v = f.to_json();
        let g = QSeries::from_json(&v).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn display_uses_reduced_exponents() {
        let f = from_pairs(&[(1, 16), (2, -128)], 2, 4);
        assert_eq!(format!("{f}"), "16*q^(1/2) - 128*q + O(q^2)");
    }

    #[test]
    fn evaluation_matches_geometric_sum() {
        // f = sum q^n below 40 at tau = i: sum e^(-2 pi n) = 1/(1 - e^(-2 pi)).
        let pairs: Vec<(i64, i64)> = (0..40).map(|n| (n, 1)).collect();
        let f = from_pairs(&pairs, 1, 40);
        let p = Prec::from_digits(30);
        let tau = Cf::new(Rf::zero(p), Rf::int(1, p));
        let (val, err) = f
            .evaluate(&tau, p, TailBound::Poly { c: r(1), g: 0 })
            .unwrap();
        let x = (-(Rf::pi(p) + Rf::pi(p))).exp();
        let expect = (Rf::int(1, p) - &x).recip();
        let diff = (&val.re - &expect).abs();
        // The reference value has its own rounding error at p bits.
        let tol = &err + &Rf::pow2(-(p.bits() as i32) + 8, p);
        assert!(diff.lt(&tol), "difference {} exceeds bound {}", diff.fmt_decimal(5), tol.fmt_decimal(5));
        assert!(err.lt(&Rf::pow2(-60, p)));
        assert!(val.im.abs().lt(&Rf::pow2(-60, p)));
    }

    #[test]
    fn evaluation_rejects_lower_half_plane() {
        let f = QSeries::one(5);
        let p = Prec::from_digits(20);
        let tau = Cf::new(Rf::zero(p), Rf::int(-1, p));
        assert!(f.evaluate(&tau, p, TailBound::Heuristic).is_err());
    }

    #[test]
    fn tail_bound_failure_is_reported() {
        // Heuristic bound with |q| extremely close to 1 cannot certify.
        let f = from_pairs(&[(0, 1), (1, 1)], 1, 2);
        let p = Prec::from_digits(20);
        let tau = Cf::new(Rf::zero(p), Rf::pow2(-40, p));
        match f.evaluate(&tau, p, TailBound::Heuristic) {
            Err(Error::InsufficientTruncation(_)) => {}
            other => panic!("expected insufficient truncation, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn distributivity_holds(
            a in proptest::collection::vec((0i64..30, -9i64..9), 0..8),
            b in proptest::collection::vec((0i64..30, -9i64..9), 0..8),
            c in proptest::collection::vec((0i64..30, -9i64..9), 0..8),
        ) {
            let sa = from_pairs(&a, 1, 30);
            let sb = from_pairs(&b, 1, 30);
            let sc = from_pairs(&c, 1, 30);
            let lhs = sa.add(&sb).mul(&sc);
            let rhs = sa.mul(&sc).add(&sb.mul(&sc));
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn inverse_is_two_sided(
            tail in proptest::collection::vec((1i64..20, -9i64..9), 0..6),
        ) {
            // Unit leading coefficient guarantees invertibility.
            let mut pairs = vec![(0i64, 1i64)];
            pairs.extend(tail);
            let f = from_pairs(&pairs, 1, 25);
            let inv = f.invert().unwrap();
            let prod = f.mul(&inv);
            prop_assert!(prod.agrees_with(&QSeries::one(25)));
        }

        #[test]
        fn first_difference_spots_an_injected_error(
            base in proptest::collection::vec((0i64..20, -9i64..9), 1..6),
            at in 0i64..20,
        ) {
            let sa = from_pairs(&base, 1, 20);
            let bump = QSeries::monomial(r(1), at, 1, 20);
            let sb = sa.add(&bump);
            let d = sa.first_difference(&sb);
            prop_assert_eq!(d, Some((at, 1)));
        }
    }
}
