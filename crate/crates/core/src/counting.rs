//! Counting machinery on top of a completed system: the Hilbert polynomial
//! of parametric Taylor coefficients, the gauge correction that removes
//! pure-gauge directions, gauge-corrected characters, compatibility and
//! strength coefficients, field-theoretic degrees of freedom, and the counts
//! of free functions parametrizing the general solution. `analyze` runs the
//! whole pipeline — completion included — and returns one report.
//!
//! Conventions: `r` counts orders beyond the completed order q, so H(r) is
//! the number of parametric coordinates at order q + r. Gauge generator
//! counts γ_ℓ say how many arbitrary gauge functions enter with ℓ extra
//! derivatives; γ is indexed from ℓ = 0.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;

use crate::combinatorics::{factorial, modified_stirling, to_u64};
use crate::completion::{cartan_kuranishi, CompletionError, CompletionStep};
use crate::jets::{characters, Characters};
use crate::linalg::{format_rational, Rational};
use crate::series_oracle::{oracle_summary, OracleSummary};
use crate::system::PDESystem;

/// Polynomial in one variable r with exact rational coefficients, stored
/// ascending with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of r^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    pub fn eval_at(&self, r: u32) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(r)))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::from_coeffs((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl fmt::Display for Polynomial {
    /// "9 + 6 r + r^2"; zero coefficients are skipped, the zero polynomial
    /// prints as "0".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&mag))?;
            }
            if k >= 1 {
                if show_coeff {
                    write!(f, " ")?;
                }
                write!(f, "r")?;
                if k >= 2 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

/// The binomial coefficient C(r + shift, k) as a polynomial in r:
/// ∏_{i=0}^{k-1} (r + shift - i) / k!.
pub fn choose_poly(shift: i64, k: usize) -> Polynomial {
    let mut p = Polynomial::constant(Rational::one());
    for i in 0..k as i64 {
        p = p.mul(&Polynomial::from_coeffs(vec![
            Rational::from_integer(BigInt::from(shift - i)),
            Rational::one(),
        ]));
    }
    p.scale(&Rational::new(BigInt::one(), factorial(k as u64)))
}

/// Hilbert polynomial of an involutive system from its characters:
/// H(r) = Σ_k C(r+k-1, k-1) α^(k), the parametric count at order q + r.
pub fn hilbert(c: &Characters) -> Polynomial {
    let mut h = Polynomial::zero();
    for (k, alpha) in c.alpha.iter().enumerate() {
        let k = k + 1;
        h = h.add(&choose_poly(k as i64 - 1, k - 1).scale(&Rational::from_integer(alpha.clone())));
    }
    h
}

/// Gauge polynomial: how many order-(q+r) Taylor coordinates are pure gauge.
/// A generator entering with ℓ extra derivatives contributes the full jet
/// layer of an unconstrained scalar at order q+r+ℓ, C(q+r+ℓ+n-1, n-1).
pub fn gauge_polynomial(gammas: &[u64], n: usize, q: u32) -> Polynomial {
    let mut g = Polynomial::zero();
    for (ell, gamma) in gammas.iter().enumerate() {
        if *gamma == 0 {
            continue;
        }
        let shift = q as i64 + ell as i64 + n as i64 - 1;
        g = g.add(&choose_poly(shift, n - 1).scale(&Rational::from_integer(BigInt::from(*gamma))));
    }
    g
}

/// Invert H̄(r) = Σ_k C(r+k-1, k-1) ᾱ^(k) for the corrected characters ᾱ.
/// Top class first: ᾱ^(n) is (n-1)! times the leading coefficient; walking
/// down, the contribution of the already-known higher classes is removed
/// using the sums-over-products s^(N)_k (elementary symmetric polynomials of
/// X+1 .. X+N): C(r+j-1, j-1) has k-th coefficient s^(j-1)_{j-k}(0)/(j-1)!.
pub fn gauge_corrected_characters(h_bar: &Polynomial, n: usize) -> Vec<Rational> {
    assert!(n >= 1);
    assert!(
        h_bar.degree().unwrap_or(0) < n,
        "a corrected Hilbert polynomial cannot exceed degree n - 1"
    );
    let fact = |k: u64| Rational::from_integer(factorial(k));
    let mut alpha_bar = vec![Rational::zero(); n];
    alpha_bar[n - 1] = h_bar.coeff(n - 1) * fact(n as u64 - 1);
    for k in (1..n).rev() {
        let mut value = h_bar.coeff(k - 1) * fact(k as u64 - 1);
        for j in (k + 1)..=n {
            let weight = fact(k as u64 - 1) / fact(j as u64 - 1);
            let s = modified_stirling(j - 1, (j - k) as i64, &Rational::zero());
            value -= weight * &alpha_bar[j - 1] * s;
        }
        alpha_bar[k - 1] = value;
    }
    alpha_bar
}

/// Compatibility coefficient Z⁰ = α^(n) − Σ_ℓ γ_ℓ: the top corrected
/// character. Zero means the evolution equations carry no constraint excess.
pub fn compatibility_coefficient(alpha: &[BigInt], gammas: &[u64]) -> Rational {
    let total: u64 = gammas.iter().sum();
    Rational::from_integer(alpha.last().expect("characters are non-empty").clone())
        - Rational::from_integer(BigInt::from(total))
}

/// Strength coefficient Z¹ = (n−1)·(n/2·α^(n) + α^(n−1) − Σ_ℓ (n/2+q+ℓ)·γ_ℓ).
pub fn strength_coefficient(alpha: &[BigInt], gammas: &[u64], q: u32) -> Rational {
    let n = alpha.len();
    assert!(
        n >= 2,
        "the strength coefficient needs at least two variables"
    );
    let half_n = Rational::new(BigInt::from(n), BigInt::from(2));
    let mut inner = &half_n * Rational::from_integer(alpha[n - 1].clone())
        + Rational::from_integer(alpha[n - 2].clone());
    for (ell, gamma) in gammas.iter().enumerate() {
        let weight = &half_n + Rational::from_integer(BigInt::from(q as u64 + ell as u64));
        inner -= weight * Rational::from_integer(BigInt::from(*gamma));
    }
    inner * Rational::from_integer(BigInt::from(n as u64 - 1))
}

/// Field-theoretic degrees of freedom: Z¹ / ((n−1) q).
pub fn degrees_of_freedom(z1: &Rational, n: usize, q: u32) -> Rational {
    assert!(n >= 2 && q >= 1);
    z1 / Rational::from_integer(BigInt::from((n as u64 - 1) * q as u64))
}

/// Counts of free functions of k variables in the general solution, from the
/// corrected characters. Closed forms are available for second- and
/// first-order systems in four variables (the q-th difference of ᾱ); in
/// general only the top two entries are determined, the rest are `None`.
pub fn free_function_counts(alpha_bar: &[Rational], q: u32) -> Vec<Option<Rational>> {
    let n = alpha_bar.len();
    let a = |k: usize| -> Rational {
        if (1..=n).contains(&k) {
            alpha_bar[k - 1].clone()
        } else {
            Rational::zero()
        }
    };
    let two = Rational::from_integer(BigInt::from(2));
    match (n, q) {
        (4, 2) => (1..=4)
            .map(|k| Some(a(k) - &two * a(k + 1) + a(k + 2)))
            .collect(),
        (4, 1) => (1..=4).map(|k| Some(a(k) - a(k + 1))).collect(),
        _ => {
            let mut out = vec![None; n];
            out[n - 1] = Some(a(n));
            if n >= 2 {
                out[n - 2] = Some(a(n - 1) - Rational::from_integer(BigInt::from(q)) * a(n));
            }
            out
        }
    }
}

fn serialize_rational<S: Serializer>(r: &Rational, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(r))
}

fn serialize_rationals<S: Serializer>(v: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&format_rational(r))?;
    }
    seq.end()
}

fn serialize_opt_rationals<S: Serializer>(
    v: &[Option<Rational>],
    ser: S,
) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.as_ref().map(format_rational))?;
    }
    seq.end()
}

/// Everything the analysis pipeline produces for one system. Exact rationals
/// serialize as "p/q" strings; character vectors are indexed by class 1..n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub input_order: u32,
    pub completed_order: u32,
    pub prolongations: u32,
    pub projections: u32,
    /// Solution-set dimension on the jet fiber at the completed order.
    pub dim: u64,
    /// Independent equations at the completed order.
    pub rank: u64,
    pub beta: Vec<u64>,
    pub alpha: Vec<u64>,
    pub num_multiplicative: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub gammas: Vec<u64>,
    #[serde(rename = "H")]
    pub hilbert: Polynomial,
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub gauge: Option<Polynomial>,
    #[serde(rename = "H_bar")]
    pub corrected_hilbert: Polynomial,
    #[serde(serialize_with = "serialize_rationals")]
    pub alpha_bar: Vec<Rational>,
    #[serde(rename = "Z0", serialize_with = "serialize_rational")]
    pub compatibility: Rational,
    #[serde(rename = "Z1", serialize_with = "serialize_rational")]
    pub strength: Rational,
    pub compatible: bool,
    #[serde(serialize_with = "serialize_rational")]
    pub dof: Rational,
    #[serde(serialize_with = "serialize_opt_rationals")]
    pub free_functions: Vec<Option<Rational>>,
    /// Σ ℓ·γ_ℓ ≤ (q−1)·β^(n−1), reported for gauge systems, never enforced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postulated_bound_holds: Option<bool>,
    /// Set by the parameter recheck: `Some(true)` means the invariants change
    /// when the declared parameter values are shifted, i.e. the declared
    /// values sit at a special point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter_special: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<CompletionStep>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub completed_system: PDESystem,
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub max_steps: usize,
    /// Include the step-by-step completion trace in the report.
    pub include_trace: bool,
    /// Run the series oracle on the completed system up to this many levels.
    pub oracle_levels: Option<u32>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            max_steps: crate::completion::DEFAULT_MAX_STEPS,
            include_trace: false,
            oracle_levels: None,
        }
    }
}

/// Complete the system and compute every count the report carries.
pub fn analyze(s: &PDESystem, opts: &AnalyzeOptions) -> Result<AnalysisReport, CompletionError> {
    let trace = cartan_kuranishi(s, opts.max_steps)?;
    let done = &trace.result;
    let n = done.n();
    let q = done.q();
    let c = characters(done);

    let h = hilbert(&c);
    let gammas = s.gammas().to_vec();
    let (gauge, h_bar) = if gammas.is_empty() {
        (None, h.clone())
    } else {
        let g = gauge_polynomial(&gammas, n, q);
        let h_bar = h.sub(&g);
        (Some(g), h_bar)
    };
    let alpha_bar = gauge_corrected_characters(&h_bar, n);

    let z0 = compatibility_coefficient(&c.alpha, &gammas);
    debug_assert_eq!(
        z0,
        alpha_bar[n - 1],
        "Z0 must equal the top corrected character"
    );
    let z1 = strength_coefficient(&c.alpha, &gammas, q);
    let dof = degrees_of_freedom(&z1, n, q);
    let free_functions = free_function_counts(&alpha_bar, q);

    let postulated_bound_holds = if gammas.is_empty() {
        None
    } else {
        let weighted: u64 = gammas.iter().enumerate().map(|(l, g)| l as u64 * g).sum();
        let budget = BigInt::from(q as u64 - 1) * &c.beta[n - 2];
        Some(BigInt::from(weighted) <= budget)
    };

    let mut warnings = Vec::new();
    if !dof.denom().is_one() {
        warnings.push(format!(
            "degrees of freedom {} is not an integer; the strength count does \
             not split evenly at order {q}",
            format_rational(&dof)
        ));
    }

    let oracle = opts
        .oracle_levels
        .map(|levels| oracle_summary(done, levels));

    Ok(AnalysisReport {
        name: s.name().to_string(),
        n,
        m: done.m(),
        input_order: s.q(),
        completed_order: q,
        prolongations: trace.prolongations,
        projections: trace.projections,
        dim: to_u64(&done.dim_r()),
        rank: done.independent_equation_count() as u64,
        beta: c.beta.iter().map(to_u64).collect(),
        alpha: c.alpha.iter().map(to_u64).collect(),
        num_multiplicative: to_u64(&c.num_multiplicative()),
        gammas,
        hilbert: h,
        gauge,
        corrected_hilbert: h_bar,
        alpha_bar,
        compatibility: z0.clone(),
        strength: z1,
        compatible: z0.is_zero(),
        dof,
        free_functions,
        postulated_bound_holds,
        parameter_special: None,
        warnings,
        trace: opts.include_trace.then(|| trace.steps.clone()),
        oracle,
        completed_system: trace.result,
    })
}
