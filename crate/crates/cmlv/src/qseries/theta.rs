//! Jacobi theta constants, the modular lambda, and their identity checks.
//!
//! Conventions (all series in `q = e^(2 pi i tau)`):
//! `theta2 = sum_{n in Z} q^((2n+1)^2/8)`, `theta3 = sum q^(n^2/2)`,
//! `theta4 = sum (-1)^n q^(n^2/2)`, and `lambda = (theta2/theta3)^4`.
//! The checks relate these to eta quotients with cleared denominators, so
//! every comparison is a product identity between exact expansions.

use super::{eisenstein::e2_expand, eta::eta_expand, QSeries};
use crate::real::{Prec, Rf};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Which theta constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaKind {
    /// `theta2`, leading term `2 q^(1/8)`.
    Two,
    /// `theta3`, constant term 1.
    Three,
    /// `theta4`, constant term 1, alternating signs.
    Four,
}

/// Expansion of `theta(s tau)` with `s = s_num/s_den > 0`, exact below the
/// integer exponent `order`.
pub fn theta_expand(kind: ThetaKind, s_num: i64, s_den: i64, order: i64) -> QSeries {
    assert!(s_num >= 1 && s_den >= 1, "theta scale must be positive");
    let two = BigRational::from_integer(BigInt::from(2));
    match kind {
        ThetaKind::Two => {
            // 2 sum_{n>=0} q^(s (2n+1)^2 / 8): grid 1/(8 s_den).
            let denom = 8 * s_den;
            let trunc = order * denom;
            let mut s = QSeries::zero(denom, trunc);
            let mut n = 0i64;
            loop {
                let key = s_num * (2 * n + 1) * (2 * n + 1);
                if key >= trunc {
                    break;
                }
                s = s.add(&QSeries::monomial(two.clone(), key, denom, order));
                n += 1;
            }
            s.normalize()
        }
        ThetaKind::Three | ThetaKind::Four => {
            // 1 + 2 sum_{n>=1} (±1)^n q^(s n^2 / 2): grid 1/(2 s_den).
            let denom = 2 * s_den;
            let trunc = order * denom;
            let mut s = QSeries::monomial(BigRational::one(), 0, denom, order);
            let mut n = 1i64;
            loop {
                let key = s_num * n * n;
                if key >= trunc {
                    break;
                }
                let c = if matches!(kind, ThetaKind::Four) && n % 2 == 1 {
                    -two.clone()
                } else {
                    two.clone()
                };
                s = s.add(&QSeries::monomial(c, key, denom, order));
                n += 1;
            }
            s.normalize()
        }
    }
}

/// Numeric theta value `theta(s * i t)` for real `s, t > 0`, with a certified
/// tail bound.
pub fn theta_value(kind: ThetaKind, s: &Rf, t: &Rf, prec: Prec) -> (Rf, Rf) {
    let p = prec.widen(32);
    let pi = Rf::pi(p);
    let cutoff = Rf::pow2(-(p.bits() as i32) - 16, p);
    let one = Rf::int(1, p);
    match kind {
        ThetaKind::Two => {
            // u = e^(-pi s t / 4); value = 2 sum u^((2n+1)^2).
            let u = (-&(&(&pi * s) * t) / &Rf::int(4, p)).exp();
            let mut sum = Rf::zero(p);
            let mut n = 0i64;
            let term_at = |n: i64| u.powi((2 * n + 1) * (2 * n + 1));
            loop {
                let term = term_at(n);
                sum = &sum + &term;
                n += 1;
                if term_at(n).lt(&cutoff) {
                    break;
                }
            }
            let tail = &(&term_at(n) + &term_at(n)) / &(&one - &u);
            (&sum + &sum, &tail + &tail)
        }
        ThetaKind::Three | ThetaKind::Four => {
            let v = (-&(&(&pi * s) * t)).exp();
            let mut sum = Rf::int(1, p);
            let mut n = 1i64;
            loop {
                let term = v.powi(n * n);
                let signed = if matches!(kind, ThetaKind::Four) && n % 2 == 1 {
                    -&(&term + &term)
                } else {
                    &term + &term
                };
                sum = &sum + &signed;
                n += 1;
                if v.powi(n * n).lt(&cutoff) {
                    break;
                }
            }
            let tail = &(&v.powi(n * n) + &v.powi(n * n)) / &(&one - &v);
            (sum, &tail + &tail)
        }
    }
}

/// Expansion of the modular lambda `(theta2/theta3)^4`, exact below `order`.
pub fn lambda_expand(order: i64) -> Result<QSeries> {
    let t2 = theta_expand(ThetaKind::Two, 1, 1, order + 1);
    let t3 = theta_expand(ThetaKind::Three, 1, 1, order + 1);
    let num = t2.pow(4)?;
    let den = t3.pow(4)?;
    Ok(num.div(&den)?.truncate_keys(order * num.denom().max(den.denom())).normalize())
}

/// First failure among the quartic Jacobi relation `theta3^4 = theta2^4 + theta4^4`
/// checked below `order`; `None` means the identity holds on that range.
pub fn jacobi_quartic_mismatch(order: i64) -> Result<Option<(i64, i64)>> {
    let t2 = theta_expand(ThetaKind::Two, 1, 1, order);
    let t3 = theta_expand(ThetaKind::Three, 1, 1, order);
    let t4 = theta_expand(ThetaKind::Four, 1, 1, order);
    Ok(t3.pow(4)?.first_difference(&t2.pow(4)?.add(&t4.pow(4)?)))
}

/// First failure among the three theta-to-eta product forms (denominators
/// cleared):
/// `theta2 eta(t) = 2 eta(2t)^2`,
/// `theta3 eta(t/2)^2 eta(2t)^2 = eta(t)^5`,
/// `theta4 eta(t) = eta(t/2)^2`.
pub fn theta_eta_mismatch(order: i64) -> Result<Option<(i64, i64)>> {
    let t2 = theta_expand(ThetaKind::Two, 1, 1, order);
    let t3 = theta_expand(ThetaKind::Three, 1, 1, order);
    let t4 = theta_expand(ThetaKind::Four, 1, 1, order);
    let e1 = eta_expand(1, 1, order + 1);
    let eh = eta_expand(1, 2, order + 1);
    let e2 = eta_expand(2, 1, order + 1);
    if let Some(d) = t2.mul(&e1).first_difference(&e2.pow(2)?.scale(&BigRational::from_integer(2.into()))) {
        return Ok(Some(d));
    }
    if let Some(d) = t3.mul(&eh.pow(2)?).mul(&e2.pow(2)?).first_difference(&e1.pow(5)?) {
        return Ok(Some(d));
    }
    Ok(t4.mul(&e1).first_difference(&eh.pow(2)?))
}

/// First failure of the complement form `1 - lambda = (theta4/theta3)^4`
/// together with its eta version
/// `(1 - lambda) eta(t)^24 = (eta(t/2)^2 eta(2t))^8`, below `order`.
pub fn lambda_complement_mismatch(order: i64) -> Result<Option<(i64, i64)>> {
    let lam = lambda_expand(order)?;
    let one = QSeries::one(order);
    let t3 = theta_expand(ThetaKind::Three, 1, 1, order);
    let t4 = theta_expand(ThetaKind::Four, 1, 1, order);
    let lhs = one.sub(&lam).mul(&t3.pow(4)?);
    if let Some(d) = lhs.first_difference(&t4.pow(4)?) {
        return Ok(Some(d));
    }
    let e1 = eta_expand(1, 1, order + 2);
    let eh = eta_expand(1, 2, order + 2);
    let e2 = eta_expand(2, 1, order + 2);
    let lhs_eta = one.sub(&lam).mul(&e1.pow(24)?);
    let rhs_eta = eh.pow(2)?.mul(&e2).pow(8)?;
    Ok(lhs_eta.first_difference(&rhs_eta))
}

/// First failure of the lambda derivative law, in both of its forms:
/// `2 q dlambda/dq = lambda theta4^4` and
/// `6 q dlambda/dq = lambda (E2(tau/2) + 8 E2(2 tau) - 6 E2(tau))`,
/// checked below `order`.
pub fn lambda_derivative_check(order: i64) -> Result<Option<(i64, i64)>> {
    let lam = lambda_expand(order)?;
    let dlam = lam.derivative_qddq();
    let two = BigRational::from_integer(BigInt::from(2));
    let t4 = theta_expand(ThetaKind::Four, 1, 1, order);
    if let Some(d) = dlam.scale(&two).first_difference(&lam.mul(&t4.pow(4)?)) {
        return Ok(Some(d));
    }
    let e_half = e2_expand(1, 2, order);
    let e_two = e2_expand(2, 1, order);
    let e_one = e2_expand(1, 1, order);
    let combo = e_half
        .add(&e_two.scale(&BigRational::from_integer(8.into())))
        .sub(&e_one.scale(&BigRational::from_integer(6.into())));
    let six = BigRational::from_integer(BigInt::from(6));
    Ok(dlam.scale(&six).first_difference(&lam.mul(&combo)))
}

/// First failure of the two E2 bridge identities used to pass between the
/// theta and Eisenstein forms of the derivative law:
/// `3 theta3^4 = 4 E2(2 tau) - E2(tau/2)` and
/// `theta3^4 + theta2^4 = 2 E2(tau) - E2(tau/2)`, below `order`.
pub fn e2_theta_bridge_mismatch(order: i64) -> Result<Option<(i64, i64)>> {
    let t2 = theta_expand(ThetaKind::Two, 1, 1, order);
    let t3 = theta_expand(ThetaKind::Three, 1, 1, order);
    let e_half = e2_expand(1, 2, order);
    let e_two = e2_expand(2, 1, order);
    let e_one = e2_expand(1, 1, order);
    let three = BigRational::from_integer(BigInt::from(3));
    let lhs1 = t3.pow(4)?.scale(&three);
    let rhs1 = e_two.scale(&BigRational::from_integer(4.into())).sub(&e_half);
    if let Some(d) = lhs1.first_difference(&rhs1) {
        return Ok(Some(d));
    }
    let lhs2 = t3.pow(4)?.add(&t2.pow(4)?);
    let rhs2 = e_one.scale(&BigRational::from_integer(2.into())).sub(&e_half);
    Ok(lhs2.first_difference(&rhs2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Cf;
    use num_traits::FromPrimitive;

    fn r(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    /// Lattice-sum oracle for theta expansions: count representations
    /// directly instead of generating term by term.
    fn naive_theta3(order: i64) -> QSeries {
        let mut s = QSeries::monomial(r(1), 0, 2, order);
        for n in 1..200 {
            let key = n * n;
            if key >= order * 2 {
                break;
            }
            s = s.add(&QSeries::monomial(r(2), key, 2, order));
        }
        s
    }

    #[test]
    fn theta_expansions_match_lattice_oracle() {
        let t3 = theta_expand(ThetaKind::Three, 1, 1, 40);
        assert!(t3.agrees_with(&naive_theta3(40)));
        // Frozen leading terms.
        let t2 = theta_expand(ThetaKind::Two, 1, 1, 5);
        assert_eq!(t2.coeff(1, 8), r(2));
        assert_eq!(t2.coeff(9, 8), r(2));
        assert_eq!(t2.coeff(25, 8), r(2));
        let t4 = theta_expand(ThetaKind::Four, 1, 1, 5);
        assert_eq!(t4.coeff(0, 1), r(1));
        assert_eq!(t4.coeff(1, 2), r(-2));
        assert_eq!(t4.coeff(2, 1), r(2));
    }

    #[test]
    fn lambda_has_the_known_leading_coefficients() {
        let lam = lambda_expand(4).unwrap();
        assert_eq!(lam.denom(), 2);
        for (n, c) in [(1i64, 16i64), (2, -128), (3, 704), (4, -3072), (5, 11488)] {
            assert_eq!(lam.coeff(n, 2), r(c), "lambda coefficient at q^({n}/2)");
        }
    }

    #[test]
    fn jacobi_quartic_holds_to_order_60() {
        assert_eq!(jacobi_quartic_mismatch(60).unwrap(), None);
    }

    #[test]
    fn theta_eta_forms_hold_to_order_60() {
        assert_eq!(theta_eta_mismatch(60).unwrap(), None);
    }

    #[test]
    fn lambda_complement_holds_to_order_40() {
        assert_eq!(lambda_complement_mismatch(40).unwrap(), None);
    }

    #[test]
    fn lambda_derivative_law_holds_to_order_40() {
        assert_eq!(lambda_derivative_check(40).unwrap(), None);
    }

    #[test]
    fn e2_bridges_hold_to_order_60() {
        assert_eq!(e2_theta_bridge_mismatch(60).unwrap(), None);
    }

    #[test]
    fn perturbed_identity_reports_first_bad_exponent() {
        // Inject +q^3 into theta3^4 and re-run the quartic check by hand.
        let t2 = theta_expand(ThetaKind::Two, 1, 1, 20);
        let t3 = theta_expand(ThetaKind::Three, 1, 1, 20);
        let t4 = theta_expand(ThetaKind::Four, 1, 1, 20);
        let bad = t3.pow(4).unwrap().add(&QSeries::monomial(r(1), 3, 1, 20));
        let d = bad.first_difference(&t2.pow(4).unwrap().add(&t4.pow(4).unwrap()));
        assert_eq!(d, Some((3, 1)));
    }

    #[test]
    fn lambda_value_at_10i_matches_series_asymptotics() {
        // lambda(10 i) = 16 e^(-10 pi) - 128 e^(-20 pi) + ...; check the
        // numeric theta quotient against the exact series evaluated there.
        let p = Prec::from_digits(40);
        let one = Rf::int(1, p);
        let t = Rf::int(10, p);
        let (n2, _) = theta_value(ThetaKind::Two, &one, &t, p);
        let (n3, _) = theta_value(ThetaKind::Three, &one, &t, p);
        let lam_num = (&n2 / &n3).powi(4);
        let lam = lambda_expand(30).unwrap();
        let tau = Cf::new(Rf::zero(p), t.clone());
        let (sv, se) = lam
            .evaluate(&tau, p, crate::qseries::TailBound::Heuristic)
            .unwrap();
        let diff = (&sv.re - &lam_num).abs();
        assert!(diff.lt(&(&se + &Rf::pow2(-(p.bits() as i32) + 20, p))));
        // Leading asymptotic: 16 e^(-10 pi) to within the next term's size.
        let lead = Rf::int(16, p) * (-&(Rf::pi(p) * Rf::int(10, p))).exp();
        let gap = (&lam_num - &lead).abs();
        let next = Rf::int(130, p) * (-&(Rf::pi(p) * Rf::int(20, p))).exp();
        assert!(gap.lt(&next));
    }

    #[test]
    fn theta_values_satisfy_jacobi_numerically() {
        let p = Prec::from_digits(35);
        let one = Rf::int(1, p);
        for (tn, td) in [(1i64, 1i64), (7, 10), (13, 10)] {
            let t = Rf::frac(tn, td, p);
            let (v2, e2) = theta_value(ThetaKind::Two, &one, &t, p);
            let (v3, e3) = theta_value(ThetaKind::Three, &one, &t, p);
            let (v4, e4) = theta_value(ThetaKind::Four, &one, &t, p);
            let lhs = v3.powi(4);
            let rhs = &v2.powi(4) + &v4.powi(4);
            let diff = (&lhs - &rhs).abs();
            let tol = &(&(&e2 + &e3) + &e4).abs() * &Rf::int(100, p)
                + Rf::pow2(-(p.bits() as i32) + 24, p);
            assert!(diff.lt(&tol), "t = {tn}/{td}: {}", diff.fmt_decimal(8));
        }
    }
}
