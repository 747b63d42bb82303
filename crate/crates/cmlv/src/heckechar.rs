//! Hecke character coefficient sequences for the CM newforms.
//!
//! The five eta-quotient newforms in this crate all have complex
//! multiplication: their Fourier coefficients are sums of powers of a Hecke
//! character over ideals of `Z[i]` or `Z[sqrt(-3)]`.  This module enumerates
//! canonical ideal generators by a direct lattice scan, raises the character
//! value (an exact integer pair in the order) to the k-th power, and sums per
//! norm.  Conjugate ideals are enumerated together, so every imaginary part
//! cancels exactly and the result is an integer sequence.
//!
//! The same machinery drives the coefficient congruences between the
//! weight-2..6 forms on the `Z[sqrt(-3)]` side.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::qseries::EtaQuotient;
use crate::{Error, Result};

/// Which imaginary quadratic order the character lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharField {
    /// `Z[i]`, discriminant -4.
    Gaussian,
    /// `Z[sqrt(-3)]`, discriminant -3 (index 2 in the Eisenstein integers).
    Eisenstein,
}

/// The k-th power of the base Hecke character of a [`CharField`].
///
/// The attached newform has weight `k + 1`.  Supported powers: `k = 1, 2` on
/// the Gaussian side and `1 <= k <= 11` on the Eisenstein side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrossCharSpec {
    field: CharField,
    k: u32,
}

impl GrossCharSpec {
    /// Validates the power range for the chosen field.
    pub fn new(field: CharField, k: u32) -> Result<GrossCharSpec> {
        let ok = match field {
            CharField::Gaussian => (1..=2).contains(&k),
            CharField::Eisenstein => (1..=11).contains(&k),
        };
        if !ok {
            return Err(Error::Invalid(format!(
                "unsupported character power k = {k} for {field:?}"
            )));
        }
        Ok(GrossCharSpec { field, k })
    }

    /// The underlying order.
    pub fn field(&self) -> CharField {
        self.field
    }

    /// The character power.
    pub fn k(&self) -> u32 {
        self.k
    }
}

/// Exact coefficients `a(1..=n_max)` of a newform, indexed from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffSeq {
    values: Vec<i128>,
}

impl CoeffSeq {
    fn from_values(values: Vec<i128>) -> CoeffSeq {
        CoeffSeq { values }
    }

    /// Largest index carried by the sequence.
    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// Coefficient `a(n)` for `1 <= n <= n_max`.
    pub fn get(&self, n: usize) -> i128 {
        assert!(n >= 1 && n <= self.values.len(), "index {n} out of range");
        self.values[n - 1]
    }

    /// The full slice `[a(1), ..., a(n_max)]`.
    pub fn values(&self) -> &[i128] {
        &self.values
    }
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Canonical generators of the odd-norm ideals of `Z[i]` with norm at most
/// `n_max`: one lattice point `(a, b)` per ideal, normalized by `a = 1 (mod 4)`
/// and `b` even.  Sorted by norm, then `b`, then `a`.
///
/// Exactly one of the four associates of an odd-norm element satisfies the
/// normalization, so the scan hits each ideal once; conjugate ideals appear as
/// `(a, b)` and `(a, -b)`.
pub fn canonical_generators_gaussian(n_max: i64) -> Vec<(i64, i64)> {
    let mut gens = Vec::new();
    let amax = isqrt(n_max);
    for a in -amax..=amax {
        if a.rem_euclid(4) != 1 {
            continue;
        }
        let bmax = isqrt(n_max - a * a);
        for b in -bmax..=bmax {
            if b.rem_euclid(2) != 0 {
                continue;
            }
            gens.push((a, b));
        }
    }
    gens.sort_by_key(|&(a, b)| (a * a + b * b, b, a));
    gens
}

/// A generator `a + b sqrt(-3)` together with how many generators its ideal
/// has under the `a = 1 (mod 3)` normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealGenerator {
    /// Rational part.
    pub a: i64,
    /// Coefficient of `sqrt(-3)`.
    pub b: i64,
    /// 1 for odd-norm ideals, 3 for even-norm ideals (whose three generators
    /// differ by cube roots of unity and sum to zero).
    pub multiplicity: u32,
}

impl IdealGenerator {
    /// `a^2 + 3 b^2`.
    pub fn norm(&self) -> i64 {
        self.a * self.a + 3 * self.b * self.b
    }

    /// The full generator orbit under the normalization: the point itself for
    /// multiplicity 1, or the three cube-root-of-unity associates for
    /// multiplicity 3 (these sum to zero componentwise).
    pub fn orbit(&self) -> Vec<(i64, i64)> {
        if self.multiplicity == 1 {
            return vec![(self.a, self.b)];
        }
        // (a + b sqrt(-3)) * (-1 +- sqrt(-3)) / 2; integral because a = b (mod 2).
        assert_eq!((self.a - self.b).rem_euclid(2), 0);
        let za = (-self.a - 3 * self.b) / 2;
        let zb = (self.a - self.b) / 2;
        let wa = (-self.a + 3 * self.b) / 2;
        let wb = (-self.a - self.b) / 2;
        vec![(self.a, self.b), (za, zb), (wa, wb)]
    }
}

/// Canonical generators of ideals of `Z[sqrt(-3)]` prime to `sqrt(-3)` with
/// norm at most `n_max`, normalized by `a = 1 (mod 3)`.
///
/// Odd-norm ideals (norm `= 1 (mod 3)`, exactly one of `a, b` even) have a
/// unique normalized generator and appear with multiplicity 1.  With
/// `include_even_norms` set, ideals of norm `4^i m` (the even prime is inert)
/// are added through the representative `(-2)^i (a, b)` over the odd-norm
/// generators `(a, b)`; each such ideal has three normalized generators, so the
/// representative carries multiplicity 3.  Sorted by norm, then `b`, then `a`.
pub fn canonical_generators_eisenstein(n_max: i64, include_even_norms: bool) -> Vec<IdealGenerator> {
    let mut gens = Vec::new();
    let amax = isqrt(n_max);
    for a in -amax..=amax {
        if a.rem_euclid(3) != 1 {
            continue;
        }
        let bmax = isqrt((n_max - a * a) / 3);
        for b in -bmax..=bmax {
            if a * a + 3 * b * b > n_max {
                continue;
            }
            if (a.rem_euclid(2) + b.rem_euclid(2)) != 1 {
                continue;
            }
            gens.push(IdealGenerator { a, b, multiplicity: 1 });
        }
    }
    if include_even_norms {
        let odd_count = gens.len();
        for idx in 0..odd_count {
            let g = gens[idx];
            let (mut a, mut b, mut norm) = (g.a, g.b, g.norm());
            while norm <= n_max / 4 {
                a *= -2;
                b *= -2;
                norm *= 4;
                gens.push(IdealGenerator { a, b, multiplicity: 3 });
            }
        }
    }
    gens.sort_by_key(|g| (g.norm(), g.b, g.a));
    gens
}

/// `(x.0 + x.1 w)(y.0 + y.1 w)` with `w^2 = -d`.
fn mul_pair(x: (i128, i128), y: (i128, i128), d: i128) -> (i128, i128) {
    (x.0 * y.0 - d * x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

fn pow_pair(base: (i128, i128), k: u32, d: i128) -> (i128, i128) {
    let mut acc = (1, 0);
    for _ in 0..k {
        acc = mul_pair(acc, base, d);
    }
    acc
}

/// Adds the geometric Euler factor at a prime of norm `p`: the output is the
/// Dirichlet convolution of `values` with `sum_j (mult^j) [n = p^j]`.
fn apply_geometric_factor(values: &mut [i128], p: usize, mult: i128) {
    let n = values.len() - 1;
    let base = values.to_vec();
    let mut pj = p;
    let mut mj = mult;
    while pj <= n {
        for m in 1..=n / pj {
            values[pj * m] += mj * base[m];
        }
        pj *= p;
        mj *= mult;
    }
}

/// Coefficients `a(1..=n)` of the newform attached to `spec`.
///
/// Gaussian side: `psi((a + bi)) = (-1)^(b/2) (a - bi)` over the canonical
/// odd-norm generators; the coefficients of both supported powers live on odd
/// indices only.
///
/// `Z[sqrt(-3)]` side: `chi((a + b sqrt(-3))) = a - b sqrt(-3)` over the
/// odd-norm generators, then one geometric Euler factor per supported prime:
/// for even `k` the ramified prime of norm 3 enters with multiplier
/// `(-3)^(k/2)`, and for `3 | k` the inert even prime of norm 4 enters with
/// multiplier `(-2)^k` (for other `k` the three generators of an even-norm
/// ideal sum to zero and contribute nothing, keeping the support odd).
pub fn coefficients(spec: GrossCharSpec, n: usize) -> Result<CoeffSeq> {
    if n == 0 {
        return Err(Error::Invalid("coefficient range must be nonempty".into()));
    }
    let k = spec.k();
    let mut re = vec![0i128; n + 1];
    let mut im = vec![0i128; n + 1];
    match spec.field() {
        CharField::Gaussian => {
            for (a, b) in canonical_generators_gaussian(n as i64) {
                let norm = (a * a + b * b) as usize;
                let sign: i128 = if b.rem_euclid(4) == 2 { -1 } else { 1 };
                let v = pow_pair((sign * a as i128, -sign * b as i128), k, 1);
                re[norm] += v.0;
                im[norm] += v.1;
            }
        }
        CharField::Eisenstein => {
            for g in canonical_generators_eisenstein(n as i64, false) {
                let norm = g.norm() as usize;
                let v = pow_pair((g.a as i128, -g.b as i128), k, 3);
                re[norm] += v.0;
                im[norm] += v.1;
            }
        }
    }
    for (idx, &v) in im.iter().enumerate() {
        assert!(v == 0, "imaginary parts must cancel at norm {idx}");
    }
    if spec.field() == CharField::Eisenstein {
        if k % 2 == 0 {
            re[0] = 0;
            apply_geometric_factor(&mut re, 3, (-3i128).pow(k / 2));
        }
        if k % 3 == 0 {
            re[0] = 0;
            apply_geometric_factor(&mut re, 4, (-2i128).pow(k));
        }
    }
    re.remove(0);
    Ok(CoeffSeq::from_values(re))
}

/// One congruence between two coefficient sequences.
#[derive(Clone, Debug)]
pub struct CongruenceCheck {
    /// Human-readable statement, e.g. `a_3(n) = a_2(n) (mod 3)`.
    pub label: String,
    /// The modulus.
    pub modulus: i128,
    /// Smallest index where the congruence fails, if any.
    pub first_violation: Option<usize>,
}

impl CongruenceCheck {
    /// Whether the congruence held over the scanned range.
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Outcome of [`congruence_scan`].
#[derive(Clone, Debug)]
pub struct CongruenceReport {
    /// Largest index scanned.
    pub n_max: usize,
    /// The four congruences, in weight order.
    pub checks: Vec<CongruenceCheck>,
}

impl CongruenceReport {
    /// Whether every congruence held.
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(CongruenceCheck::holds)
    }
}

/// Smallest `n` with `x(n) != y(n) (mod modulus)`, scanning the shared range.
pub fn first_congruence_violation(x: &CoeffSeq, y: &CoeffSeq, modulus: i128) -> Option<usize> {
    let n = x.n_max().min(y.n_max());
    (1..=n).find(|&i| (x.get(i) - y.get(i)).rem_euclid(modulus) != 0)
}

/// Scans the congruences between the weight-2..6 forms on the `Z[sqrt(-3)]`
/// side (writing `a_w` for the coefficients of the weight-`w` form):
/// `a_3 = a_2 (mod 3)`, `a_4 = a_2 (mod 8)`, `a_5 = a_2 (mod 9)` and
/// `a_6 = a_2 (mod 240)`, for all `n <= n_max`.
pub fn congruence_scan(n_max: usize) -> Result<CongruenceReport> {
    let seqs: Vec<CoeffSeq> = (1..=5)
        .map(|k| coefficients(GrossCharSpec::new(CharField::Eisenstein, k)?, n_max))
        .collect::<Result<_>>()?;
    let a2 = &seqs[0];
    let checks = [(1usize, 3i128), (2, 8), (3, 9), (4, 240)]
        .iter()
        .map(|&(idx, modulus)| CongruenceCheck {
            label: format!("a_{}(n) = a_2(n) (mod {})", idx + 2, modulus),
            modulus,
            first_violation: first_congruence_violation(&seqs[idx], a2, modulus),
        })
        .collect();
    Ok(CongruenceReport { n_max, checks })
}

/// The named newforms: `(name, character power, eta-quotient model)`.
///
/// The two weight-2 forms are named for their level; the higher-weight forms
/// on the `Z[sqrt(-3)]` side are `h_w` with `w` the weight.  Weights 6 and up
/// have no eta-quotient model.
pub fn named_forms() -> Vec<(&'static str, GrossCharSpec, Option<EtaQuotient>)> {
    let spec = |field, k| GrossCharSpec::new(field, k).expect("catalog powers are valid");
    let eta = |factors: &[(i64, i64, i64)]| {
        Some(EtaQuotient::new(factors).expect("catalog models are valid"))
    };
    vec![
        ("f32", spec(CharField::Gaussian, 1), eta(&[(4, 1, 2), (8, 1, 2)])),
        ("g", spec(CharField::Gaussian, 2), eta(&[(4, 1, 6)])),
        ("f36", spec(CharField::Eisenstein, 1), eta(&[(6, 1, 4)])),
        ("h3", spec(CharField::Eisenstein, 2), eta(&[(2, 1, 3), (6, 1, 3)])),
        ("h4", spec(CharField::Eisenstein, 3), eta(&[(3, 1, 8)])),
        ("h5", spec(CharField::Eisenstein, 4), None),
        ("h6", spec(CharField::Eisenstein, 5), None),
    ]
}

/// Looks up a named form.
pub fn named_form(name: &str) -> Option<(GrossCharSpec, Option<EtaQuotient>)> {
    named_forms()
        .into_iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, spec, eta)| (spec, eta))
}

/// First index at which `seq` differs from the eta quotient's integer
/// q-expansion, or `None` if they agree over the full range of `seq`.
pub fn eta_mismatch(seq: &CoeffSeq, model: &EtaQuotient) -> Result<Option<usize>> {
    let n = seq.n_max();
    let series = model.expand(n as i64 + 1)?;
    for i in 1..=n {
        let expect = BigRational::from_integer(BigInt::from(seq.get(i)));
        if series.coeff(i as i64, 1) != expect {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
