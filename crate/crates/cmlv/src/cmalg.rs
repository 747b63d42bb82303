//! CM algebra: the level-2 modular polynomial, the j-u and j-t relations,
//! and exact radical values of j, u, eta and phi at the sqrt(-3) family of
//! points (`tau0 = i/sqrt(3)`).
//!
//! Values are carried as shallow radical expression trees paired with a
//! high-precision numeric; every exact claim is re-verified numerically
//! against direct series evaluation at the CM point.  The tower is solved,
//! not copied, wherever the algebra stays over the rationals: `j(sqrt(-3))`
//! comes out of `Phi_2(X, 0) = (X - 54000)^3` exactly, its neighbors from the
//! integer quadratic factor of `Phi_2(X, 54000)`, and `u(sqrt(-3))` from the
//! dyadic rational root plus conjugate-quadratic split of the degree-3 u-j
//! relation.  Deeper values (over Q(sqrt 2, sqrt 3)) are tabulated and
//! certified by Newton refinement against the defining cubic plus direct
//! evaluation.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::hyperfun::beta;
use crate::qseries::{eisenstein_expand, phi_expand, t_expand, EisensteinSpec, EtaQuotient, QSeries, TailBound};
use crate::real::{Cf, Prec, Rf};
use crate::{Error, Result};

fn rq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A shallow radical expression over the rationals, with `pi` and
/// `B(1/3, 1/3)` as the only transcendental leaves.
#[derive(Clone, Debug, PartialEq)]
pub enum Alg {
    /// Exact rational.
    Rat(BigRational),
    /// The circle constant.
    Pi,
    /// The Beta value `B(1/3, 1/3)`.
    BetaOneThird,
    /// `inner^(1/d)` for positive `inner` (nonpositive radicands are errors).
    Root(Box<Alg>, u32),
    /// Integer power (possibly negative).
    Pow(Box<Alg>, i64),
    /// Sum of terms.
    Sum(Vec<Alg>),
    /// Product of factors.
    Prod(Vec<Alg>),
}

impl Alg {
    /// Integer literal.
    pub fn int(n: i64) -> Alg {
        Alg::Rat(rq(n, 1))
    }

    /// Rational literal.
    pub fn rat(n: i64, d: i64) -> Alg {
        Alg::Rat(rq(n, d))
    }

    /// `x^(1/d)`.
    pub fn root(x: Alg, d: u32) -> Alg {
        Alg::Root(Box::new(x), d)
    }

    /// `sqrt(n)` for an integer.
    pub fn sqrt_int(n: i64) -> Alg {
        Alg::root(Alg::int(n), 2)
    }

    /// `x^k`.
    pub fn pow(x: Alg, k: i64) -> Alg {
        Alg::Pow(Box::new(x), k)
    }

    /// Numeric value at the requested precision.
    pub fn eval(&self, prec: Prec) -> Result<Rf> {
        let p = prec.widen(16);
        Ok(match self {
            Alg::Rat(r) => Rf::rat(r, p),
            Alg::Pi => Rf::pi(p),
            Alg::BetaOneThird => beta(&rq(1, 3), &rq(1, 3), p)?,
            Alg::Root(inner, d) => {
                let v = inner.eval(prec)?;
                if !matches!(v.signum(), Some(1)) {
                    return Err(Error::Domain(format!("nonpositive radicand in {self}")));
                }
                v.pow_rat(1, *d as i64)
            }
            Alg::Pow(inner, k) => inner.eval(prec)?.powi(*k),
            Alg::Sum(terms) => {
                let mut acc = Rf::zero(p);
                for t in terms {
                    acc = &acc + &t.eval(prec)?;
                }
                acc
            }
            Alg::Prod(factors) => {
                let mut acc = Rf::int(1, p);
                for f in factors {
                    acc = &acc * &f.eval(prec)?;
                }
                acc
            }
        })
    }
}

impl std::fmt::Display for Alg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Alg::Rat(r) => write!(f, "{r}"),
            Alg::Pi => write!(f, "pi"),
            Alg::BetaOneThird => write!(f, "B(1/3,1/3)"),
            Alg::Root(x, d) => write!(f, "({x})^(1/{d})"),
            Alg::Pow(x, k) => write!(f, "({x})^({k})"),
            Alg::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Alg::Prod(factors) => {
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    match x {
                        Alg::Sum(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// `sum_i c_i sqrt(r_i)` with rational `c_i` and square-free `r_i` (1 allowed).
fn surd_sum(terms: &[(BigRational, i64)]) -> Alg {
    let parts = terms
        .iter()
        .map(|(c, r)| {
            if *r == 1 {
                Alg::Rat(c.clone())
            } else {
                Alg::Prod(vec![Alg::Rat(c.clone()), Alg::sqrt_int(*r)])
            }
        })
        .collect();
    Alg::Sum(parts)
}

fn surd_sum_int(terms: &[(i64, i64, i64)]) -> Alg {
    let v: Vec<(BigRational, i64)> = terms.iter().map(|&(n, d, r)| (rq(n, d), r)).collect();
    surd_sum(&v)
}

/// A radical expression together with its numeric realization.
#[derive(Clone, Debug)]
pub struct AlgebraicValue {
    /// What the value is (e.g. `j(2 sqrt(-3))`).
    pub label: String,
    /// Exact radical form.
    pub expression: Alg,
    /// Numeric value of `expression` at the construction precision.
    pub numeric: Rf,
}

impl AlgebraicValue {
    /// Builds the pair, evaluating the expression.
    pub fn new(label: &str, expression: Alg, prec: Prec) -> Result<AlgebraicValue> {
        let numeric = expression.eval(prec)?;
        Ok(AlgebraicValue { label: label.to_string(), expression, numeric })
    }

    /// Re-evaluates the expression (the invariant behind `numeric`).
    pub fn revalidate(&self, prec: Prec) -> Result<Rf> {
        self.expression.eval(prec)
    }
}

/// Symmetric bivariate integer polynomial, stored as `(deg_x, deg_y, coeff)`.
#[derive(Clone, Debug)]
pub struct ModularPolynomial {
    terms: Vec<(u32, u32, BigInt)>,
}

/// The level-2 modular polynomial `Phi_2(X, Y)`.
pub fn phi2_modular_polynomial() -> ModularPolynomial {
    let c = |n: i64| BigInt::from(n);
    ModularPolynomial {
        terms: vec![
            (3, 0, c(1)),
            (0, 3, c(1)),
            (2, 2, c(-1)),
            (2, 1, c(1488)),
            (1, 2, c(1488)),
            (2, 0, c(-162000)),
            (0, 2, c(-162000)),
            (1, 1, c(40773375)),
            (1, 0, c(8748000000)),
            (0, 1, c(8748000000)),
            (0, 0, c(-157464000000000)),
        ],
    }
}

impl ModularPolynomial {
    /// The raw `(deg_x, deg_y, coeff)` terms.
    pub fn terms(&self) -> &[(u32, u32, BigInt)] {
        &self.terms
    }

    /// Coefficients of `X^0..X^3` after substituting an integer for `Y`.
    pub fn specialize_y(&self, y: &BigInt) -> [BigInt; 4] {
        let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (a, b, c) in &self.terms {
            out[*a as usize] += c * y.pow(*b);
        }
        out
    }

    /// Coefficients of `X^0..X^3` for a numeric `Y`.
    pub fn univariate_in_x(&self, y: &Rf, p: Prec) -> [Rf; 4] {
        let mut out = [Rf::zero(p), Rf::zero(p), Rf::zero(p), Rf::zero(p)];
        for (a, b, c) in &self.terms {
            let term = &Rf::rat(&BigRational::from_integer(c.clone()), p) * &y.powi(*b as i64);
            out[*a as usize] = &out[*a as usize] + &term;
        }
        out
    }

    /// Numeric evaluation.
    pub fn eval_values(&self, x: &Rf, y: &Rf, p: Prec) -> Rf {
        let cs = self.univariate_in_x(y, p);
        let mut acc = Rf::zero(p);
        for c in cs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Evaluation on q-series (used for the `Phi_2(j(q), j(q^2)) = 0` check).
    pub fn eval_series(&self, x: &QSeries, y: &QSeries) -> QSeries {
        let xp = [QSeries::one(x.trunc()), x.clone(), x.mul(x), x.mul(x).mul(x)];
        let yp = [QSeries::one(y.trunc()), y.clone(), y.mul(y), y.mul(y).mul(y)];
        let mut acc: Option<QSeries> = None;
        for (a, b, c) in &self.terms {
            let t = xp[*a as usize]
                .mul(&yp[*b as usize])
                .scale(&BigRational::from_integer(c.clone()));
            acc = Some(match acc {
                None => t,
                Some(s) => s.add(&t),
            });
        }
        acc.expect("polynomial has terms")
    }
}

/// Hauptmodul series `u = (eta(2 tau)/eta(tau))^24 = q + ...`, exact below
/// `order`.
pub fn u_series(order: i64) -> Result<QSeries> {
    EtaQuotient::new(&[(2, 1, 24), (1, 1, -24)])?.expand(order)
}

/// `j = (1 + 256 u)^3 / u` applied to a series.
pub fn j_from_u_series(u: &QSeries) -> Result<QSeries> {
    let one = QSeries::one(u.trunc());
    let num = one.add(&u.scale(&rq(256, 1))).pow(3)?;
    num.div(u)
}

/// The elliptic j series `q^-1 + 744 + 196884 q + ...`, exact wherever the
/// truncation arithmetic certifies it.
pub fn j_series(order: i64) -> Result<QSeries> {
    j_from_u_series(&u_series(order + 3)?)
}

/// `j = (t+3)^3 (t+9)^3 (t^2+27)^3 / (t^3 (t^2+9t+27)^3)` applied to a series.
pub fn j_from_t_series(t: &QSeries) -> Result<QSeries> {
    let shift = |s: &QSeries, c: i64| s.add(&QSeries::monomial(rq(c, 1), 0, 1, s.trunc()).rescale_denom(s.denom()));
    let t2 = t.mul(t);
    let num = shift(t, 3).pow(3)?.mul(&shift(t, 9).pow(3)?).mul(&shift(&t2, 27).pow(3)?);
    let den = t.pow(3)?.mul(&shift(&t2.add(&t.scale(&rq(9, 1))), 27).pow(3)?);
    num.div(&den)
}

/// Exact rational transport `j = (1 + 256 u)^3 / u`.
pub fn j_from_u_rat(u: &BigRational) -> BigRational {
    let n = BigRational::one() + BigRational::from_integer(256.into()) * u;
    &(&n * &n) * &n / u
}

/// Numeric `u(tau)` via the eta-quotient product, with relative error bound.
pub fn u_value(tau: &Cf, prec: Prec) -> Result<(Cf, Rf)> {
    EtaQuotient::new(&[(2, 1, 24), (1, 1, -24)])?.evaluate(tau, prec)
}

/// Numeric `j(tau)` via `u`, with a propagated relative error bound.
pub fn j_value(tau: &Cf, prec: Prec) -> Result<(Cf, Rf)> {
    let p = prec.widen(16);
    let (u, uerr) = u_value(tau, prec)?;
    let num = &Cf::one(p) + &u.scale(&Rf::int(256, p));
    let j = &(&(&num * &num) * &num) / &u;
    // d log j = (768/(1+256u) - 1/u) du: crude amplification bound.
    let amp = &(&(&Rf::int(768, p) * &u.abs()) / &num.abs()) + &Rf::int(1, p);
    Ok((j, &uerr * &amp))
}

/// Newton refinement of a root of `c0 + c1 X + c2 X^2 + c3 X^3`.
fn newton_cubic(coeffs: &[Rf; 4], start: &Rf, p: Prec) -> Rf {
    let mut x = start.clone();
    for _ in 0..128 {
        let f = &(&(&(&coeffs[3] * &x) + &coeffs[2]) * &x + &coeffs[1]) * &x + &coeffs[0];
        let fp = &(&(&(&coeffs[3] * &Rf::int(3, p)) * &x) + &(&coeffs[2] + &coeffs[2])) * &x
            + &coeffs[1];
        if fp.is_zero() || f.is_bad() {
            break;
        }
        let step = &f / &fp;
        x = &x - &step;
        if step.abs().lt(&(&x.abs() * &Rf::pow2(-(p.bits() as i32), p))) {
            break;
        }
    }
    x
}

/// The solved CM tower: j-values and u-values of the sqrt(-3) family.
#[derive(Clone, Debug)]
pub struct CmTower {
    /// `j` at `sqrt(-3)`, `2 sqrt(-3)`, `sqrt(-3)/2`, `sqrt(-3)/4`.
    pub j_values: Vec<AlgebraicValue>,
    /// `u` at `i`, `zeta_3`, `(1+i)/2`, `sqrt(-3)`, `2 sqrt(-3)`,
    /// `sqrt(-3)/2`, `sqrt(-3)/4`.
    pub u_values: Vec<AlgebraicValue>,
}

/// Relative agreement gate used when matching radical candidates to numeric
/// estimates at the CM points.
const SELECT_TOL_LOG10: i64 = 6;

fn select_tol(p: Prec) -> Rf {
    Rf::frac(1, 10, p).powi(SELECT_TOL_LOG10)
}

/// Checks a candidate value against a direct numeric estimate at its point.
fn gate(label: &str, candidate: &Rf, estimate: &Cf, p: Prec) -> Result<()> {
    let scale = &estimate.abs() + &Rf::int(1, p);
    let off_re = (&estimate.re - candidate).abs();
    if !off_re.lt(&(&scale * &select_tol(p))) || !estimate.im.abs().lt(&(&scale * &select_tol(p))) {
        return Err(Error::RootSelection(format!(
            "{label}: candidate {} vs estimate {}",
            candidate.fmt_decimal(12),
            estimate.re.fmt_decimal(12)
        )));
    }
    Ok(())
}

fn sqrt3(p: Prec) -> Rf {
    Rf::int(3, p).sqrt()
}

/// Dyadic rational roots of a cubic with rational coefficients (the u-j
/// relation's rational roots in this tower are all `+-2^(-m)`).
fn dyadic_rational_root(coeffs: &[BigRational; 4]) -> Option<BigRational> {
    for m in 0..=30 {
        for sign in [1i64, -1] {
            for cand in [rq(sign, 1 << m), rq(sign * (1 << m), 1)] {
                let mut acc = BigRational::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * &cand + c;
                }
                if acc.is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Splits `A u^2 + B u + C` with rational coefficients into `a +- b sqrt(3)`,
/// requiring the discriminant to be 3 times a rational square.
fn quadratic_over_sqrt3(a: &BigRational, b: &BigRational, c: &BigRational) -> Result<(BigRational, BigRational)> {
    let disc = b * b - BigRational::from_integer(4.into()) * a * c;
    let reduced = &disc / BigRational::from_integer(3.into());
    if reduced.is_negative() {
        return Err(Error::Domain("negative discriminant".into()));
    }
    let sq = |n: &BigInt| -> Option<BigInt> {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    let (rn, rd) = (sq(reduced.numer()), sq(reduced.denom()));
    let (rn, rd) = match (rn, rd) {
        (Some(n), Some(d)) => (n, d),
        _ => return Err(Error::RootSelection("discriminant is not 3 * square".into())),
    };
    let two_a = BigRational::from_integer(2.into()) * a;
    let mid = -b / &two_a;
    let rad = BigRational::new(rn, rd) / &two_a;
    Ok((mid, rad.abs()))
}

/// Solves the tower of j- and u-values at the sqrt(-3) points.
///
/// `j(sqrt(-3)) = 54000` falls out of `Phi_2(X, 0) = (X - 54000)^3` exactly;
/// `j(2 sqrt(-3))` and `j(sqrt(-3)/2)` are the conjugate roots of the integer
/// quadratic factor of `Phi_2(X, 54000)`, split exactly and assigned by
/// numeric estimates; `u(sqrt(-3))` comes from the dyadic rational root and
/// exact quadratic split of `(1 + 256u)^3 = 54000 u`.  The remaining values
/// (over Q(sqrt 2, sqrt 3)) are tabulated and certified: against direct
/// evaluation at the point, and for `j(sqrt(-3)/4)` also against a Newton
/// root of its defining cubic.
pub fn solve_cm_tower(prec: Prec) -> Result<CmTower> {
    let p = prec.widen(48);
    let phi2 = phi2_modular_polynomial();

    // Phi_2(X, 0) = (X - 54000)^3, coefficient by coefficient.
    let at_zero = phi2.specialize_y(&BigInt::zero());
    let a0 = BigInt::from(54000);
    let expect = [-(&a0 * &a0 * &a0), BigInt::from(3) * &a0 * &a0, BigInt::from(-3) * &a0, BigInt::one()];
    if at_zero != expect {
        return Err(Error::RootSelection("Phi_2(X, 0) is not a perfect cube".into()));
    }
    let j1 = AlgebraicValue::new("j(sqrt(-3))", Alg::int(54000), prec)?;

    // Phi_2(X, 54000) = X (X^2 - s X + q) with an exact sqrt(3) split.
    let at_j1 = phi2.specialize_y(&a0);
    if !at_j1[0].is_zero() || !at_j1[3].is_one() {
        return Err(Error::RootSelection("Phi_2(X, 54000) does not factor as expected".into()));
    }
    let (mid, rad) = quadratic_over_sqrt3(
        &BigRational::one(),
        &BigRational::from_integer(at_j1[2].clone()),
        &BigRational::from_integer(at_j1[1].clone()),
    )?;
    let plus = surd_sum(&[(mid.clone(), 1), (rad.clone(), 3)]);
    let minus = surd_sum(&[(mid.clone(), 1), (-rad.clone(), 3)]);
    // j grows as Im tau grows, so the + branch belongs to 2 sqrt(-3); confirm
    // both assignments numerically rather than assuming.
    let (j_big_est, _) = j_value(&Cf::imag(&sqrt3(p) + &sqrt3(p)), p)?;
    let (j_small_est, _) = j_value(&Cf::imag(&sqrt3(p) / &Rf::int(2, p)), p)?;
    let j2 = AlgebraicValue::new("j(2 sqrt(-3))", plus, prec)?;
    let j_half = AlgebraicValue::new("j(sqrt(-3)/2)", minus, prec)?;
    gate(&j2.label, &j2.numeric, &j_big_est, p)?;
    gate(&j_half.label, &j_half.numeric, &j_small_est, p)?;

    // j(sqrt(-3)/4): tabulated over Q(sqrt 2, sqrt 3), certified against a
    // Newton root of Phi_2(X, j(sqrt(-3)/2)) seeded from the direct estimate.
    let j_quarter = AlgebraicValue::new(
        "j(sqrt(-3)/4)",
        surd_sum_int(&[
            (2010450259344609000, 1, 1),
            (-1421603011620136125, 1, 2),
            (-1160733998424384000, 1, 3),
            (820762881440077125, 1, 6),
        ]),
        prec,
    )?;
    let (j_quarter_est, _) = j_value(&Cf::imag(&sqrt3(p) / &Rf::int(4, p)), p)?;
    gate(&j_quarter.label, &j_quarter.numeric, &j_quarter_est, p)?;
    let cubic = phi2.univariate_in_x(&j_half.expression.eval(prec)?, p);
    let refined = newton_cubic(&cubic, &j_quarter_est.re, p);
    gate("j(sqrt(-3)/4) (Newton)", &j_quarter.numeric, &Cf::real(refined), p)?;

    // u(sqrt(-3)): rational root + quadratic split of (1+256u)^3 - j u = 0,
    // whose coefficients are 2^24 u^3 + 3*2^16 u^2 + (768 - j) u + 1.
    let u_cubic = [
        BigRational::one(),
        rq(768 - 54000, 1),
        rq(3 << 16, 1),
        rq(1 << 24, 1),
    ];
    let u_rat_root = dyadic_rational_root(&u_cubic)
        .ok_or_else(|| Error::RootSelection("no dyadic root of the u-cubic".into()))?;
    // Deflate: divide by (u - r) exactly.
    let mut quot = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    let mut carry = BigRational::zero();
    for i in (1..=3).rev() {
        carry = &u_cubic[i] + &carry * &u_rat_root;
        quot[i - 1] = carry.clone();
    }
    let rem = &u_cubic[0] + &carry * &u_rat_root;
    if !rem.is_zero() {
        return Err(Error::RootSelection("u-cubic deflation left a remainder".into()));
    }
    let (mid_u, rad_u) = quadratic_over_sqrt3(&quot[2], &quot[1], &quot[0])?;
    let (u3_est, _) = u_value(&Cf::imag(sqrt3(p)), p)?;
    let u_plus = surd_sum(&[(mid_u.clone(), 1), (rad_u.clone(), 3)]);
    let u_minus = surd_sum(&[(mid_u.clone(), 1), (-rad_u.clone(), 3)]);
    let up_v = u_plus.eval(prec)?;
    let um_v = u_minus.eval(prec)?;
    let u_sqrt_m3 = if (&up_v - &u3_est.re).abs().lt(&(&um_v - &u3_est.re).abs()) {
        AlgebraicValue { label: "u(sqrt(-3))".into(), expression: u_plus, numeric: up_v }
    } else {
        AlgebraicValue { label: "u(sqrt(-3))".into(), expression: u_minus, numeric: um_v }
    };
    gate(&u_sqrt_m3.label, &u_sqrt_m3.numeric, &u3_est, p)?;

    // The remaining u-values: three exact rationals at the Gaussian-side
    // points and three tabulated surd combinations, each gated against the
    // direct eta-ratio evaluation at its point.
    let half = Rf::frac(1, 2, p);
    let points: Vec<(&str, Alg, Cf)> = vec![
        ("u(i)", Alg::rat(1, 512), Cf::imag(Rf::int(1, p))),
        (
            "u(zeta_3)",
            Alg::rat(-1, 256),
            Cf::new(-&half, &(&sqrt3(p) * &half)),
        ),
        ("u((1+i)/2)", Alg::rat(-1, 64), Cf::new(half.clone(), half.clone())),
        (
            "u(2 sqrt(-3))",
            surd_sum_int(&[(-1667, 512, 1), (9405, 4096, 2), (-15, 8, 3), (5445, 4096, 6)]),
            Cf::imag(&sqrt3(p) + &sqrt3(p)),
        ),
        (
            "u(sqrt(-3)/2)",
            surd_sum_int(&[(13, 2, 1), (-15, 4, 3)]),
            Cf::imag(&sqrt3(p) * &half),
        ),
        (
            "u(sqrt(-3)/4)",
            surd_sum_int(&[(173084, 1, 1), (-489555, 4, 2), (-99930, 1, 3), (282645, 4, 6)]),
            Cf::imag(&(&sqrt3(p) * &half) * &half),
        ),
    ];
    let mut u_values = Vec::new();
    for (label, expr, tau) in points {
        let av = AlgebraicValue::new(label, expr, prec)?;
        let (est, _) = u_value(&tau, p)?;
        gate(label, &av.numeric, &est, p)?;
        if label == "u(sqrt(-3))" {
            unreachable!();
        }
        u_values.push(av);
        if u_values.len() == 3 {
            u_values.push(u_sqrt_m3.clone());
        }
    }

    Ok(CmTower {
        j_values: vec![j1, j2, j_half, j_quarter],
        u_values,
    })
}

fn b13() -> Alg {
    Alg::BetaOneThird
}

fn two_pi() -> Alg {
    Alg::Prod(vec![Alg::int(2), Alg::Pi])
}

/// Expression for `eta(tau0) = 3^(1/8) B(1/3,1/3)^(1/2) / (2^(1/3) (2 pi)^(1/2))`.
fn eta_tau0_expr() -> Alg {
    Alg::Prod(vec![
        Alg::root(Alg::int(3), 8),
        Alg::root(b13(), 2),
        Alg::pow(Alg::root(Alg::int(2), 3), -1),
        Alg::pow(Alg::root(two_pi(), 2), -1),
    ])
}

/// The six eta values at multiples of `tau0 = i/sqrt(3)`, as radical
/// multiples of `eta(tau0)` and `eta(3 tau0) = 3^(-1/4) eta(tau0)`.
pub fn eta_cm_values(prec: Prec) -> Result<Vec<AlgebraicValue>> {
    let eta0 = eta_tau0_expr();
    let eta3 = Alg::Prod(vec![Alg::pow(Alg::root(Alg::int(3), 4), -1), eta0.clone()]);
    let eta2 = Alg::Prod(vec![
        Alg::root(surd_sum_int(&[(104, 1, 1), (60, 1, 3)]), 24),
        Alg::pow(Alg::root(Alg::int(2), 2), -1),
        eta0.clone(),
    ]);
    let eta4 = Alg::Prod(vec![
        Alg::root(surd_sum_int(&[(-4544, 1, 1), (1980, 1, 2), (-1440, 1, 3), (1980, 1, 6)]), 24),
        Alg::rat(1, 2),
        eta0.clone(),
    ]);
    let eta6 = Alg::Prod(vec![
        Alg::root(surd_sum_int(&[(-5, 1, 1), (3, 1, 3)]), 12),
        Alg::pow(Alg::root(Alg::int(2), 24), -11),
        eta3.clone(),
    ]);
    let eta12 = Alg::Prod(vec![
        Alg::root(surd_sum_int(&[(-1136, 1, 1), (-495, 1, 2), (360, 1, 3), (495, 1, 6)]), 24),
        Alg::pow(Alg::root(Alg::int(2), 12), -11),
        eta3.clone(),
    ]);
    [
        ("eta(tau0)", eta0),
        ("eta(2 tau0)", eta2),
        ("eta(3 tau0)", eta3),
        ("eta(4 tau0)", eta4),
        ("eta(6 tau0)", eta6),
        ("eta(12 tau0)", eta12),
    ]
    .into_iter()
    .map(|(label, expr)| AlgebraicValue::new(label, expr, prec))
    .collect()
}

/// Multiplier of `tau0` for each entry of [`eta_cm_values`].
pub const ETA_CM_MULTIPLIERS: [i64; 6] = [1, 2, 3, 4, 6, 12];

/// Closed forms of `phi(tau0)` and `phi1(tau0)`:
/// `phi = (sqrt 3 / (2 pi)) 2^(-1/3) B(1/3,1/3)` and
/// `phi1 = B(1/3,1/3) / (2^(2/3) sqrt(3) 2 pi)`.
pub fn phi_cm_values(prec: Prec) -> Result<(AlgebraicValue, AlgebraicValue)> {
    let phi = Alg::Prod(vec![
        Alg::sqrt_int(3),
        Alg::pow(two_pi(), -1),
        Alg::pow(Alg::root(Alg::int(2), 3), -1),
        b13(),
    ]);
    let phi1 = Alg::Prod(vec![
        b13(),
        Alg::pow(Alg::root(Alg::int(2), 3), -2),
        Alg::pow(Alg::sqrt_int(3), -1),
        Alg::pow(two_pi(), -1),
    ]);
    Ok((
        AlgebraicValue::new("phi(tau0)", phi, prec)?,
        AlgebraicValue::new("phi1(tau0)", phi1, prec)?,
    ))
}

/// `t(tau0) = 3 (2^(1/3) - 1)`.
pub fn t_cm_value(prec: Prec) -> Result<AlgebraicValue> {
    let expr = Alg::Prod(vec![
        Alg::int(3),
        Alg::Sum(vec![Alg::root(Alg::int(2), 3), Alg::int(-1)]),
    ]);
    AlgebraicValue::new("t(tau0)", expr, prec)
}

/// Relative defect of the inversion law `eta(-1/tau) = sqrt(tau/i) eta(tau)`
/// at a purely imaginary `tau = i y`.
pub fn eta_inversion_defect(y: &Rf, prec: Prec) -> Result<Rf> {
    let p = prec.widen(16);
    let eta = EtaQuotient::new(&[(1, 1, 1)])?;
    let (lhs, _) = eta.evaluate(&Cf::imag(y.recip()), p)?;
    let (rhs, _) = eta.evaluate(&Cf::imag(y.clone()), p)?;
    // tau/i = y, so the law reads eta(i/y) = sqrt(y) eta(i y).
    let scaled = &rhs.abs() * &y.sqrt();
    Ok((&(&lhs.abs() / &scaled) - &Rf::int(1, p)).abs())
}

/// Defects of `E2*(sqrt(-3))` against the closed form
/// `2^(-8/3) B(1/3,1/3)^2 / pi^2`, by two routes: the direct completed-series
/// value, and the weight-2 ladder `E2(3 tau0) = phi(tau0)^2 - 12 ehat_2(tau0)`.
pub fn e2_star_cm_defects(prec: Prec) -> Result<(Rf, Rf)> {
    let p = prec.widen(32);
    let closed = &(&Rf::int(2, p).pow_rat(-8, 3) * &beta(&rq(1, 3), &rq(1, 3), p)?.powi(2))
        / &Rf::pi(p).powi(2);

    let (direct, _) = crate::qseries::e2_star_value(&sqrt3(p), p)?;
    let d1 = (&(&direct / &closed) - &Rf::int(1, p)).abs();

    // Ladder route at tau0 = i/sqrt(3): E2*(i sqrt 3) = phi^2 - 12 ehat_2 - sqrt(3)/pi.
    let tau0 = Cf::imag(sqrt3(p).recip());
    let order = 96;
    let (phi_series, _) = phi_expand(order);
    let (phi_v, _) = phi_series.evaluate(&tau0, p, TailBound::Heuristic)?;
    let e2 = eisenstein_expand(EisensteinSpec::new(2, 1, 3)?, order);
    let (e2_v, _) = e2.series.evaluate(&tau0, p, TailBound::Poly { c: BigRational::one(), g: 2 })?;
    let ladder = &(&phi_v.re.powi(2) - &(&Rf::int(12, p) * &e2_v.re)) - &(&sqrt3(p) / &Rf::pi(p));
    let d2 = (&(&ladder / &closed) - &Rf::int(1, p)).abs();
    Ok((d1, d2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p30() -> Prec {
        Prec::from_digits(30)
    }

    /// `10^e` (callers pass negative `e`).
    fn tol(e: i32) -> Rf {
        Rf::frac(1, 10, p30()).powi(-e as i64)
    }

    fn assert_rel(a: &Rf, b: &Rf, digits: i32, what: &str) {
        let p = p30();
        let d = (&(a / b) - &Rf::int(1, p)).abs();
        assert!(d.lt(&tol(digits)), "{what}: defect {}", d.fmt_decimal(6));
    }

    #[test]
    fn phi2_specializations() {
        let phi2 = phi2_modular_polynomial();
        // (X - 54000)^3 at Y = 0.
        let c = phi2.specialize_y(&BigInt::zero());
        assert_eq!(c[3], BigInt::from(1));
        assert_eq!(c[2], BigInt::from(-162000));
        assert_eq!(c[1], BigInt::from(8748000000i64));
        assert_eq!(c[0], BigInt::from(-157464000000000i64));
        // X | Phi_2(X, 54000) with the expected quadratic cofactor.
        let c = phi2.specialize_y(&BigInt::from(54000));
        assert!(c[0].is_zero());
        assert_eq!(c[2], BigInt::from(-2835810000i64));
        assert_eq!(c[1], BigInt::from(6549518250000i64));
        // Symmetry.
        for (a, b, coeff) in phi2.terms() {
            let mirrored = phi2
                .terms()
                .iter()
                .find(|(x, y, _)| (x, y) == (b, a))
                .map(|(_, _, c)| c);
            assert_eq!(mirrored, Some(coeff));
        }
    }

    #[test]
    fn j_series_known_coefficients() {
        let j = j_series(5).unwrap();
        assert_eq!(j.coeff(-1, 1), rq(1, 1));
        assert_eq!(j.coeff(0, 1), rq(744, 1));
        assert_eq!(j.coeff(1, 1), rq(196884, 1));
        assert_eq!(j.coeff(2, 1), rq(21493760, 1));
        assert_eq!(j.coeff(3, 1), rq(864299970, 1));
    }

    #[test]
    fn phi2_annihilates_j_pair() {
        let j = j_series(40).unwrap();
        let j2 = j.substitute(2, 1);
        let z = phi2_modular_polynomial().eval_series(&j, &j2);
        assert!(z.trunc() >= 30 * z.denom(), "certified only to {}", z.trunc());
        assert!(z.is_zero_series());
    }

    #[test]
    fn j_routes_agree_to_order_60() {
        let j_u = j_series(66).unwrap();
        let t = t_expand(70).unwrap();
        let j_t = j_from_t_series(&t).unwrap();
        let diff = j_u.sub(&j_t);
        assert!(diff.trunc() >= 60 * diff.denom(), "certified only to {}", diff.trunc());
        assert!(diff.truncate_keys(60 * diff.denom()).is_zero_series());
    }

    #[test]
    fn exact_u_to_j_points() {
        assert_eq!(j_from_u_rat(&rq(1, 512)), rq(1728, 1));
        assert_eq!(j_from_u_rat(&rq(-1, 256)), rq(0, 1));
        assert_eq!(j_from_u_rat(&rq(-1, 64)), rq(1728, 1));
    }

    #[test]
    fn tower_exact_values() {
        let tower = solve_cm_tower(p30()).unwrap();
        assert_eq!(tower.j_values[0].expression, Alg::int(54000));
        // The quadratic split lands on the tabulated integers.
        assert_eq!(
            tower.j_values[1].expression,
            surd_sum_int(&[(1417905000, 1, 1), (818626500, 1, 3)])
        );
        assert_eq!(
            tower.j_values[2].expression,
            surd_sum_int(&[(1417905000, 1, 1), (-818626500, 1, 3)])
        );
        // The u-cubic split lands on the tabulated surd.
        assert_eq!(
            tower.u_values[3].expression,
            surd_sum_int(&[(13, 512, 1), (-15, 1024, 3)])
        );
        assert_eq!(tower.u_values[3].label, "u(sqrt(-3))");
    }

    #[test]
    fn tower_matches_direct_evaluation() {
        let p = p30();
        let tower = solve_cm_tower(p).unwrap();
        let pts = [
            (&tower.j_values[0], 1i64, 1i64),
            (&tower.j_values[1], 2, 1),
            (&tower.j_values[2], 1, 2),
            (&tower.j_values[3], 1, 4),
        ];
        for (av, num, den) in pts {
            let tau = Cf::imag(&(&sqrt3(p) * &Rf::int(num, p)) / &Rf::int(den, p));
            let (est, _) = j_value(&tau, p).unwrap();
            assert_rel(&av.numeric, &est.re, -9, &av.label);
        }
        for (av, tau) in [
            (&tower.u_values[0], Cf::imag(Rf::int(1, p))),
            (&tower.u_values[3], Cf::imag(sqrt3(p))),
            (&tower.u_values[4], Cf::imag(&sqrt3(p) + &sqrt3(p))),
            (&tower.u_values[5], Cf::imag(&sqrt3(p) / &Rf::int(2, p))),
            (&tower.u_values[6], Cf::imag(&sqrt3(p) / &Rf::int(4, p))),
        ] {
            let (est, _) = u_value(&tau, p).unwrap();
            assert_rel(&av.numeric, &est.re, -9, &av.label);
        }
        // j(sqrt(-3)/4) satisfies its defining cubic.
        let phi2 = phi2_modular_polynomial();
        let residual = phi2.eval_values(
            &tower.j_values[3].numeric,
            &tower.j_values[2].numeric,
            p,
        );
        // Scale: the largest term is ~j^3 ~ 1e13.
        assert!(residual.abs().lt(&(&tol(-6) * &Rf::int(10, p).powi(15))));
    }

    #[test]
    fn tower_numerics_revalidate() {
        let tower = solve_cm_tower(p30()).unwrap();
        for av in tower.j_values.iter().chain(tower.u_values.iter()) {
            let again = av.revalidate(p30()).unwrap();
            assert_rel(&again, &av.numeric, -25, &av.label);
        }
    }

    #[test]
    fn eta_values_match_direct_evaluation() {
        let p = p30();
        let values = eta_cm_values(p).unwrap();
        let eta = EtaQuotient::new(&[(1, 1, 1)]).unwrap();
        for (av, m) in values.iter().zip(ETA_CM_MULTIPLIERS) {
            let tau = Cf::imag(&Rf::int(m, p) / &sqrt3(p));
            let (est, _) = eta.evaluate(&tau, p).unwrap();
            assert_rel(&av.numeric, &est.re, -9, &av.label);
        }
    }

    #[test]
    fn eta_inversion_law_at_cm_points() {
        let p = p30();
        for m in ETA_CM_MULTIPLIERS {
            let y = &Rf::int(m, p) / &sqrt3(p);
            let d = eta_inversion_defect(&y, p).unwrap();
            assert!(d.lt(&tol(-20)), "m = {m}: defect {}", d.fmt_decimal(6));
        }
    }

    #[test]
    fn phi_values_and_t() {
        let p = p30();
        let (phi, phi1) = phi_cm_values(p).unwrap();
        // Direct series evaluation at tau0.
        let tau0 = Cf::imag(sqrt3(p).recip());
        let (phi_series, phi1_series) = phi_expand(96);
        let (phi_direct, _) = phi_series.evaluate(&tau0, p, TailBound::Heuristic).unwrap();
        let (phi1_direct, _) = phi1_series.evaluate(&tau0, p, TailBound::Heuristic).unwrap();
        assert_rel(&phi.numeric, &phi_direct.re, -12, "phi vs series");
        assert_rel(&phi1.numeric, &phi1_direct.re, -12, "phi1 vs series");

        // Assembled from the eta values: phi1 = eta(3 tau0)^3 / eta(tau0).
        let etas = eta_cm_values(p).unwrap();
        let assembled = &etas[2].numeric.powi(3) / &etas[0].numeric;
        assert_rel(&phi1.numeric, &assembled, -12, "phi1 vs eta assembly");

        // phi = (t + 3) phi1 and phi/phi1 - 3 = t(tau0) = 3 (2^(1/3) - 1).
        let t = t_cm_value(p).unwrap();
        let ratio = &(&phi.numeric / &phi1.numeric) - &Rf::int(3, p);
        assert_rel(&ratio, &t.numeric, -12, "phi/phi1 - 3 vs t");
        let (t_series_val, _) = t_expand(96)
            .unwrap()
            .evaluate(&tau0, p, TailBound::Heuristic)
            .unwrap();
        assert_rel(&t.numeric, &t_series_val.re, -12, "t closed form vs series");
    }

    #[test]
    fn e2_star_routes() {
        let (d1, d2) = e2_star_cm_defects(p30()).unwrap();
        assert!(d1.lt(&tol(-12)), "direct: {}", d1.fmt_decimal(6));
        assert!(d2.lt(&tol(-12)), "ladder: {}", d2.fmt_decimal(6));
    }

    #[test]
    fn negative_radicands_rejected() {
        assert!(Alg::root(Alg::int(-2), 2).eval(p30()).is_err());
        assert!(Alg::root(Alg::int(-8), 3).eval(p30()).is_err());
        assert!(Alg::root(Alg::int(0), 24).eval(p30()).is_err());
    }

    #[test]
    fn display_round_trip_sanity() {
        let tower = solve_cm_tower(p30()).unwrap();
        for av in tower.j_values.iter().chain(tower.u_values.iter()) {
            let s = format!("{}", av.expression);
            assert!(!s.is_empty());
        }
        assert_eq!(format!("{}", Alg::rat(13, 512)), "13/512");
        assert_eq!(
            format!("{}", surd_sum_int(&[(13, 2, 1), (-15, 4, 3)])),
            "13/2 + -15/4*(3)^(1/2)"
        );
    }
}
