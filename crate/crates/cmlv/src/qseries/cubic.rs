//! The cubic theta triple on the hexagonal lattice.
//!
//! Definitions (lattice sums over `m, n` in `Z`, with `Q = m^2 + mn + n^2`):
//! `a = sum q^Q`, `b = sum zeta3^(m-n) q^Q`, and `c` is the same sum over the
//! lattice shifted by `(1/3, 1/3)`. The cube relation `a^3 = b^3 + c^3` and
//! the eta-quotient forms of all three are checked as exact product
//! identities.

use super::{eta::eta_expand, QSeries};
use crate::Result;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Which member of the cubic triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicKind {
    /// `a`: plain lattice count, constant term 1.
    A,
    /// `b`: cube-root-of-unity weights, constant term 1.
    B,
    /// `c`: shifted lattice, leading term `3 q^(1/3)`.
    C,
}

/// Expansion of a cubic theta from its lattice definition, exact below `order`.
pub fn cubic_theta_expand(kind: CubicKind, order: i64) -> QSeries {
    // |m|, |n| <= sqrt(4/3 * bound) covers Q < bound (and the shifted case).
    let bound = order.max(1);
    let reach = ((bound as f64) * 4.0 / 3.0).sqrt() as i64 + 2;
    match kind {
        CubicKind::A | CubicKind::B => {
            let mut counts: std::collections::BTreeMap<i64, i64> = Default::default();
            for m in -reach..=reach {
                for n in -reach..=reach {
                    let q = m * m + m * n + n * n;
                    if q >= bound {
                        continue;
                    }
                    let w = match kind {
                        CubicKind::A => 1,
                        // zeta3^(m-n) summed in conjugate pairs: residue 0
                        // contributes 1, residues 1 and 2 contribute -1/2
                        // each; pairing makes the total integral, so count
                        // class 0 fully and classes 1, 2 by -1/2 via doubling.
                        CubicKind::B => {
                            if (m - n).rem_euclid(3) == 0 {
                                2
                            } else {
                                -1
                            }
                        }
                        CubicKind::C => unreachable!(),
                    };
                    *counts.entry(q).or_insert(0) += w;
                }
            }
            let mut s = QSeries::zero(1, bound);
            for (q, w) in counts {
                let c = match kind {
                    CubicKind::A => BigRational::from_integer(BigInt::from(w)),
                    CubicKind::B => BigRational::new(BigInt::from(w), BigInt::from(2)),
                    CubicKind::C => unreachable!(),
                };
                s = s.add(&QSeries::monomial(c, q, 1, bound));
            }
            s
        }
        CubicKind::C => {
            // Exponent ((3m+1)^2 + (3m+1)(3n+1) + (3n+1)^2)/9 = key/3 with
            // key = 3 Q + 3 (m+n) + 1.
            let mut counts: std::collections::BTreeMap<i64, i64> = Default::default();
            for m in -reach..=reach {
                for n in -reach..=reach {
                    let key = 3 * (m * m + m * n + n * n) + 3 * (m + n) + 1;
                    if key < 3 * bound {
                        *counts.entry(key).or_insert(0) += 1;
                    }
                }
            }
            let mut s = QSeries::zero(3, 3 * bound);
            for (key, w) in counts {
                s = s.add(&QSeries::monomial(
                    BigRational::from_integer(BigInt::from(w)),
                    key,
                    3,
                    bound,
                ));
            }
            s
        }
    }
}

/// First failure among the cube relation `a^3 = b^3 + c^3` and the eta forms
/// `b eta(3t) = eta(t)^3`, `c eta(t) = 3 eta(3t)^3`,
/// `a eta(t) = 3 eta(3t)^3 + eta(t/3)^3`, checked below `order`.
pub fn cubic_identities_mismatch(order: i64) -> Result<Option<(i64, i64)>> {
    let a = cubic_theta_expand(CubicKind::A, order + 2);
    let b = cubic_theta_expand(CubicKind::B, order + 2);
    let c = cubic_theta_expand(CubicKind::C, order + 2);
    let lhs = a.pow(3)?;
    let rhs = b.pow(3)?.add(&c.pow(3)?);
    if let Some(d) = lhs.first_difference(&rhs) {
        return Ok(Some(d));
    }
    let e1 = eta_expand(1, 1, order + 2);
    let e3 = eta_expand(3, 1, order + 2);
    let e13 = eta_expand(1, 3, order + 2);
    let three = BigRational::from_integer(BigInt::from(3));
    if let Some(d) = b.mul(&e3).first_difference(&e1.pow(3)?) {
        return Ok(Some(d));
    }
    if let Some(d) = c.mul(&e1).first_difference(&e3.pow(3)?.scale(&three)) {
        return Ok(Some(d));
    }
    let rhs_a = e3.pow(3)?.scale(&three).add(&e13.pow(3)?);
    Ok(a.mul(&e1).first_difference(&rhs_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;

    fn r(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    #[test]
    fn lattice_counts_match_hand_enumeration() {
        let a = cubic_theta_expand(CubicKind::A, 8);
        for (n, c) in [(0, 1), (1, 6), (2, 0), (3, 6), (4, 6), (5, 0), (6, 0), (7, 12)] {
            assert_eq!(a.coeff(n, 1), r(c), "a coefficient at q^{n}");
        }
        let b = cubic_theta_expand(CubicKind::B, 8);
        for (n, c) in [(0, 1), (1, -3), (2, 0), (3, 6), (4, -3), (5, 0), (6, 0), (7, -6)] {
            assert_eq!(b.coeff(n, 1), r(c), "b coefficient at q^{n}");
        }
        let c3 = cubic_theta_expand(CubicKind::C, 8);
        assert_eq!(c3.denom(), 3);
        assert_eq!(c3.coeff(1, 3), r(3));
        assert_eq!(c3.coeff(4, 3), r(3));
    }

    #[test]
    fn b_coefficients_are_integers() {
        let b = cubic_theta_expand(CubicKind::B, 50);
        for (n, c) in b.terms() {
            assert!(c.is_integer(), "b coefficient at key {n} is {c}");
        }
    }

    #[test]
    fn cube_relation_and_eta_forms_hold() {
        assert_eq!(cubic_identities_mismatch(40).unwrap(), None);
    }

    #[test]
    fn corrupted_cube_relation_is_caught() {
        let a = cubic_theta_expand(CubicKind::A, 12).add(&QSeries::monomial(r(1), 5, 1, 12));
        let b = cubic_theta_expand(CubicKind::B, 12);
        let c = cubic_theta_expand(CubicKind::C, 12);
        let lhs = a.pow(3).unwrap();
        let rhs = b.pow(3).unwrap().add(&c.pow(3).unwrap());
        let d = lhs.first_difference(&rhs);
        assert_eq!(d, Some((5, 1)));
    }
}
