//! Code constructions from polynomials over finite fields.
//!
//! A codeword is the graph of a polynomial of degree at most `kappa`:
//! either time as a function of wavelength (P1, P3) or wavelength as a
//! function of time (P2, P4, P5). Degree-`kappa` difference arguments bound
//! every nontrivial correlation by `kappa`.
//!
//! P2, P4 and P5 evaluate polynomials on a multiplicative subgroup of order
//! `T`; a cyclic time shift then corresponds to the substitution
//! `f(x) -> f(beta^tau x)`. Polynomials fixed by a nontrivial substitution
//! ("sub-period" polynomials) are discarded, the rest fall into free orbits
//! of size `T`, and one canonical representative per orbit is emitted.
//!
//! Family sizes follow from a Mobius-inversion count of the non-sub-period
//! polynomials; `expected_size` evaluates those closed forms so generated
//! families can be checked against them.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::code::{CodeFamily, CodeMatrix, CodeParams};
use crate::error::{Error, Result};
use crate::field::{build_field, factorize, is_prime, Elem, Field, Subgroup};
use crate::rational;

/// A degree-bounded polynomial seed: `coeffs[e]` is the coefficient of x^e.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PolySeed {
    pub coeffs: Vec<Elem>,
}

/// Guard on generate-and-filter enumerations, overridable through the
/// `OOC_ENUM_CEILING` environment variable.
pub(crate) fn enumeration_guard(space: u128) -> Result<()> {
    let ceiling = std::env::var("OOC_ENUM_CEILING")
        .ok()
        .and_then(|v| v.parse::<u128>().ok())
        .unwrap_or(1 << 24);
    if space > ceiling {
        return Err(Error::CeilingExceeded {
            size: space,
            ceiling,
        });
    }
    Ok(())
}

/// Integer Mobius function: 0 on non-squarefree n, else (-1)^(#prime factors).
pub fn mobius_int(n: u64) -> i64 {
    assert!(n >= 1);
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Coefficients of f(s x): coefficient e is multiplied by s^e.
fn substitute_scale(field: &Field, coeffs: &[Elem], s: Elem) -> Vec<Elem> {
    let mut power = Elem::ONE;
    coeffs
        .iter()
        .map(|&c| {
            let out = field.mul(c, power);
            power = field.mul(power, s);
            out
        })
        .collect()
}

/// True iff f(beta^i x) = f(x) as polynomials for some i in [1, T),
/// by direct coefficient comparison for each i.
pub fn is_subperiodic(field: &Field, coeffs: &[Elem], subgroup: &Subgroup) -> bool {
    for i in 1..subgroup.order {
        let beta_i = subgroup.elements[i as usize];
        if substitute_scale(field, coeffs, beta_i) == coeffs {
            return true;
        }
    }
    false
}

/// Iterate every coefficient vector of length `width` over the field,
/// in index (lexicographic-from-constant-term) order.
fn for_each_poly(field: &Field, width: usize, mut visit: impl FnMut(&[Elem])) {
    let q = field.q();
    let mut coeffs = vec![Elem::ZERO; width];
    loop {
        visit(&coeffs);
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == width {
                return;
            }
            let next = coeffs[pos].index() as u64 + 1;
            if next < q {
                coeffs[pos] = field.elem(next);
                break;
            }
            coeffs[pos] = Elem::ZERO;
            pos += 1;
        }
    }
}

/// Canonical non-sub-period seeds for the subgroup action: every seed that
/// is the lexicographically smallest coefficient vector in its orbit
/// { f(beta^i x) : i in [0, T) }.
fn canonical_orbit_seeds(field: &Field, kappa: u32, subgroup: &Subgroup) -> Result<Vec<PolySeed>> {
    let width = kappa as usize + 1;
    enumeration_guard((field.q() as u128).pow(width as u32))?;
    let mut seeds = Vec::new();
    for_each_poly(field, width, |coeffs| {
        let mut canonical = true;
        let mut fixed = false;
        for i in 1..subgroup.order {
            let image = substitute_scale(field, coeffs, subgroup.elements[i as usize]);
            if image[..] == *coeffs {
                fixed = true; // sub-period
                break;
            }
            if image[..] < *coeffs {
                canonical = false;
                break;
            }
        }
        if canonical && !fixed {
            seeds.push(PolySeed {
                coeffs: coeffs.to_vec(),
            });
        }
    });
    Ok(seeds)
}

/// Closed-form orbit count behind P2, P4 and P5: the number of polynomials
/// of degree <= kappa over GF(q) not fixed by any nontrivial substitution
/// x -> beta^i x, divided by the orbit size T:
///
/// ```text
/// (1/T) * sum over l | T of mu(l) * (q^ceil((kappa+1)/l) - 1)
/// ```
///
/// The corresponding sums in the source table run over the divisors of
/// q - 1; the two agree whenever T = q - 1 (and for every T at kappa <= 1),
/// but only the divisors-of-T sum matches the orbit enumeration for proper
/// subgroups at kappa >= 2, so that is the form evaluated here.
fn subgroup_orbit_count(q: u64, t: u64, kappa: u32) -> Result<BigUint> {
    use num_bigint::BigInt;
    let mut total = BigInt::from(0);
    for l in 1..=t {
        if t % l != 0 {
            continue;
        }
        let mu = mobius_int(l);
        if mu == 0 {
            continue;
        }
        let exp = ((kappa as u64 + l) / l) as u32; // ceil((kappa+1)/l)
        total += mu * (BigInt::from(q).pow(exp) - 1);
    }
    let (quot, rem) = num_integer::Integer::div_rem(&total, &BigInt::from(t));
    if total.sign() == num_bigint::Sign::Minus || !rem.is_zero() {
        return Err(Error::NonDivisibleResult {
            context: "subgroup orbit count",
            numerator: i128::try_from(total).unwrap_or(i128::MIN),
            divisor: t as i128,
        });
    }
    Ok(quot.to_biguint().expect("nonnegative"))
}

/// Construction P1: OPPW, wavelength -> time over Z_T, T prime.
///
/// One matrix per polynomial of degree <= kappa with constant term zero
/// (the canonical representative of f ~ f + delta); pulse at
/// (lambda, f(lambda)) for lambda in {0, ..., Lambda-1}. Size T^kappa.
pub fn construct_p1(t: u64, lambda: u32, kappa: u32) -> Result<CodeFamily> {
    let wavelengths: Vec<u64> = (0..lambda as u64).collect();
    construct_p1_with_wavelengths(t, &wavelengths, kappa)
}

/// P1 over an explicit wavelength subset of Z_T.
pub fn construct_p1_with_wavelengths(t: u64, subset: &[u64], kappa: u32) -> Result<CodeFamily> {
    if !is_prime(t) {
        return Err(Error::NotPrime(t));
    }
    let lambda = subset.len() as u32;
    if lambda as u64 > t || kappa >= lambda {
        return Err(Error::InvalidParams(format!(
            "P1 needs kappa < omega = Lambda <= T, got Lambda={lambda}, T={t}, kappa={kappa}"
        )));
    }
    {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != subset.len() || subset.iter().any(|&v| v >= t) {
            return Err(Error::InvalidParams(
                "wavelength subset must be distinct elements of Z_T".into(),
            ));
        }
    }
    enumeration_guard((t as u128).pow(kappa + 1))?;
    let field = build_field(t, 1)?;
    let points: Vec<Elem> = subset.iter().map(|&v| field.elem(v)).collect();

    let mut matrices = Vec::new();
    let width = kappa as usize + 1;
    let mut seeds = Vec::new();
    for_each_poly(&field, width, |coeffs| {
        if coeffs[0] == Elem::ZERO {
            seeds.push(coeffs.to_vec());
        }
    });
    for coeffs in seeds {
        let pulses: Vec<(u32, u32)> = points
            .iter()
            .enumerate()
            .map(|(li, &x)| (li as u32, field.poly_eval(&coeffs, x).index()))
            .collect();
        matrices.push(CodeMatrix::new(lambda, t as u32, pulses)?);
    }
    let params = CodeParams::new(lambda, t as u32, lambda, kappa)?;
    CodeFamily::new(
        params,
        matrices,
        format!("P1(T={t},Lambda={lambda},kappa={kappa})"),
    )
}

/// Construction P2: OPPTS, time -> wavelength over Z_p on a subgroup of
/// order T | p - 1. With kappa = 0 every polynomial is sub-period and the
/// family is empty.
pub fn construct_p2(p: u64, t: u64, kappa: u32) -> Result<CodeFamily> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let field = build_field(p, 1)?;
    construct_on_subgroup(&field, t, kappa, SubgroupCode::P2)
}

/// Construction P3: AM-OPPW, wavelength -> time with T = q - 1.
///
/// One matrix per projective class of nonzero polynomials of degree <=
/// kappa (leading nonzero coefficient normalized to 1); pulse at
/// (lambda, log_alpha f(lambda)), rows with f(lambda) = 0 left blank, then
/// pulses at the largest wavelength indices deleted down to weight
/// Lambda - kappa. Size ((T+1)^(kappa+1) - 1)/T.
pub fn construct_p3(field: &Field, lambda: u32, kappa: u32) -> Result<CodeFamily> {
    let q = field.q();
    let t = q - 1;
    let omega = lambda as i64 - kappa as i64;
    if lambda as u64 > q || omega <= kappa as i64 {
        return Err(Error::InvalidParams(format!(
            "P3 needs kappa < omega = Lambda - kappa and Lambda <= q, got Lambda={lambda}, q={q}, kappa={kappa}"
        )));
    }
    let omega = omega as u32;
    enumeration_guard((q as u128).pow(kappa + 1))?;
    let width = kappa as usize + 1;
    let mut matrices = Vec::new();
    let mut seeds = Vec::new();
    for_each_poly(field, width, |coeffs| {
        // projective representative: leading nonzero coefficient is 1
        match coeffs.iter().rev().find(|c| !c.is_zero()) {
            Some(&lead) if lead == Elem::ONE => seeds.push(coeffs.to_vec()),
            _ => {}
        }
    });
    for coeffs in seeds {
        let mut pulses = Vec::with_capacity(lambda as usize);
        for li in 0..lambda {
            let v = field.poly_eval(&coeffs, field.elem(li as u64));
            if let Some(dl) = field.discrete_log(v) {
                pulses.push((li, dl as u32));
            }
        }
        // restore constant weight: drop pulses at the largest wavelengths
        pulses.sort_unstable();
        pulses.truncate(omega as usize);
        matrices.push(CodeMatrix::new(lambda, t as u32, pulses)?);
    }
    let params = CodeParams::new(lambda, t as u32, omega, kappa)?;
    CodeFamily::new(
        params,
        matrices,
        format!("P3(q={q},Lambda={lambda},kappa={kappa})"),
    )
}

/// Construction P4: AM-OPPTS, time -> wavelength, Lambda = q - 1,
/// weight T - kappa after trimming.
pub fn construct_p4(field: &Field, t: u64, kappa: u32) -> Result<CodeFamily> {
    construct_on_subgroup(field, t, kappa, SubgroupCode::P4)
}

/// Construction P5: OPPTS, time -> wavelength, Lambda = q (the whole field),
/// weight T. Specializes to P2 when m = 1.
pub fn construct_p5(field: &Field, t: u64, kappa: u32) -> Result<CodeFamily> {
    construct_on_subgroup(field, t, kappa, SubgroupCode::P5)
}

#[derive(Clone, Copy, PartialEq)]
enum SubgroupCode {
    P2,
    P4,
    P5,
}

/// Shared machinery of P2/P4/P5: enumerate degree-<=kappa polynomials on
/// the order-T subgroup, discard sub-period ones, quotient by
/// f(x) ~ f(beta^i x) with the lexicographically smallest representative,
/// and emit one matrix per orbit.
fn construct_on_subgroup(
    field: &Field,
    t: u64,
    kappa: u32,
    which: SubgroupCode,
) -> Result<CodeFamily> {
    let q = field.q();
    let (lambda, omega_signed, tag) = match which {
        SubgroupCode::P2 => (q, t as i64, "P2"),
        SubgroupCode::P4 => (q - 1, t as i64 - kappa as i64, "P4"),
        SubgroupCode::P5 => (q, t as i64, "P5"),
    };
    if t < 1 || omega_signed <= kappa as i64 {
        return Err(Error::InvalidParams(format!(
            "{tag} needs kappa < omega, got T={t}, kappa={kappa}"
        )));
    }
    let omega = omega_signed as u64;
    let subgroup = field.subgroup(t)?;
    let seeds = canonical_orbit_seeds(field, kappa, &subgroup)?;
    let mut matrices = Vec::with_capacity(seeds.len());
    for seed in &seeds {
        matrices.push(subgroup_code_matrix(field, seed, &subgroup, which)?);
    }
    let params = CodeParams::new(lambda as u32, t as u32, omega as u32, kappa)?;
    CodeFamily::new(params, matrices, format!("{tag}(q={q},T={t},kappa={kappa})"))
}

/// Matrix of one seed under the P2/P4/P5 wavelength conventions.
///
/// P2 and P5 index wavelengths by element index (for m = 1 these coincide,
/// which is what makes P5 specialize to P2); P4 indexes the nonzero
/// elements by discrete log and leaves columns hitting zero blank, trimming
/// the largest time indices to weight T - kappa.
fn subgroup_code_matrix(
    field: &Field,
    seed: &PolySeed,
    subgroup: &Subgroup,
    which: SubgroupCode,
) -> Result<CodeMatrix> {
    let q = field.q();
    let t = subgroup.order;
    let mut pulses = Vec::with_capacity(t as usize);
    for (ti, &x) in subgroup.elements.iter().enumerate() {
        let v = field.poly_eval(&seed.coeffs, x);
        match which {
            SubgroupCode::P2 | SubgroupCode::P5 => pulses.push((v.index(), ti as u32)),
            SubgroupCode::P4 => {
                if let Some(dl) = field.discrete_log(v) {
                    pulses.push((dl as u32, ti as u32));
                }
            }
        }
    }
    let lambda = match which {
        SubgroupCode::P2 | SubgroupCode::P5 => q as u32,
        SubgroupCode::P4 => (q - 1) as u32,
    };
    if which == SubgroupCode::P4 {
        // drop pulses at the largest time indices down to weight T - kappa
        let kappa = (seed.coeffs.len() - 1) as u64;
        pulses.sort_unstable_by_key(|&(_, ti)| ti);
        pulses.truncate((t - kappa) as usize);
    }
    CodeMatrix::new(lambda, t as u32, pulses)
}

/// Construction tags accepted by `expected_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionTag {
    P1,
    P2,
    P3,
    P4,
    P5,
    R1,
    R2,
    Cp1,
    Cr1,
}

impl std::fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConstructionTag::P1 => "P1",
            ConstructionTag::P2 => "P2",
            ConstructionTag::P3 => "P3",
            ConstructionTag::P4 => "P4",
            ConstructionTag::P5 => "P5",
            ConstructionTag::R1 => "R1",
            ConstructionTag::R2 => "R2",
            ConstructionTag::Cp1 => "CP1",
            ConstructionTag::Cr1 => "CR1",
        };
        f.write_str(s)
    }
}

/// Parameters of a closed-form size query.
#[derive(Debug, Clone)]
pub enum SizeQuery {
    P1 { t: u64, kappa: u32 },
    P2 { p: u64, t: u64, kappa: u32 },
    P3 { q: u64, kappa: u32 },
    P4 { q: u64, t: u64, kappa: u32 },
    P5 { q: u64, t: u64, kappa: u32 },
    R1 { q: u64, kappa: u32 },
    R2 { q: u64, t: u64, kappa: u32 },
    Cp1 { lambda: u32, t: u64, omega: u32, kappa: u32 },
    Cr1 { lambda: u32, q: u64, omega: u32, kappa: u32 },
}

/// Result of evaluating a construction's closed-form size.
#[derive(Debug, Clone)]
pub struct SizeFormulaResult {
    pub tag: ConstructionTag,
    pub predicted: BigUint,
}

fn require_divides(t: u64, group: u64) -> Result<()> {
    if t < 1 || group % t != 0 {
        return Err(Error::NotADivisor {
            t,
            group_order: group,
        });
    }
    Ok(())
}

fn prime_power(q: u64) -> Result<(u64, u32)> {
    let factors = factorize(q);
    if factors.len() != 1 {
        return Err(Error::InvalidParams(format!("{q} is not a prime power")));
    }
    Ok(factors[0])
}

/// Exact evaluation of the closed-form family size for each construction.
/// R1 and R2 delegate to the rational-function counting routines.
pub fn expected_size(query: &SizeQuery) -> Result<SizeFormulaResult> {
    match *query {
        SizeQuery::P1 { t, kappa } => {
            if !is_prime(t) {
                return Err(Error::NotPrime(t));
            }
            Ok(SizeFormulaResult {
                tag: ConstructionTag::P1,
                predicted: BigUint::from(t).pow(kappa),
            })
        }
        SizeQuery::P2 { p, t, kappa } => {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            require_divides(t, p - 1)?;
            Ok(SizeFormulaResult {
                tag: ConstructionTag::P2,
                predicted: subgroup_orbit_count(p, t, kappa)?,
            })
        }
        SizeQuery::P3 { q, kappa } => {
            prime_power(q)?;
            // ((T+1)^(kappa+1) - 1)/T with T = q - 1
            let num = BigUint::from(q).pow(kappa + 1) - BigUint::one();
            Ok(SizeFormulaResult {
                tag: ConstructionTag::P3,
                predicted: num / BigUint::from(q - 1),
            })
        }
        SizeQuery::P4 { q, t, kappa } => {
            prime_power(q)?;
            require_divides(t, q - 1)?;
            Ok(SizeFormulaResult {
                tag: ConstructionTag::P4,
                predicted: subgroup_orbit_count(q, t, kappa)?,
            })
        }
        SizeQuery::P5 { q, t, kappa } => {
            prime_power(q)?;
            require_divides(t, q - 1)?;
            Ok(SizeFormulaResult {
                tag: ConstructionTag::P5,
                predicted: subgroup_orbit_count(q, t, kappa)?,
            })
        }
        SizeQuery::R1 { q, kappa } => {
            let (p, m) = prime_power(q)?;
            if kappa % 2 != 0 || kappa == 0 {
                return Err(Error::InvalidParams(
                    "R1 needs even kappa = 2d >= 2".into(),
                ));
            }
            let field = build_field(p, m)?;
            let c = rational::count_c(&field, kappa / 2)?;
            let t = q + 1;
            if &c % t != BigUint::zero() {
                return Err(Error::NonDivisibleResult {
                    context: "R1 size c(d)/T",
                    numerator: 0,
                    divisor: t as i128,
                });
            }
            Ok(SizeFormulaResult {
                tag: ConstructionTag::R1,
                predicted: c / t + BigUint::one(),
            })
        }
        SizeQuery::R2 { q, t, kappa } => {
            let (p, m) = prime_power(q)?;
            require_divides(t, q - 1)?;
            if kappa % 2 != 0 || kappa == 0 {
                return Err(Error::InvalidParams(
                    "R2 needs even kappa = 2d >= 2".into(),
                ));
            }
            let field = build_field(p, m)?;
            let count = rational::r2_expected_size(&field, t, kappa / 2)?;
            Ok(SizeFormulaResult {
                tag: ConstructionTag::R2,
                predicted: count,
            })
        }
        SizeQuery::Cp1 {
            lambda,
            t,
            omega,
            kappa,
        } => {
            if !is_prime(t) {
                return Err(Error::NotPrime(t));
            }
            let cw = crate::bounds::johnson_1d_cw(lambda, omega, kappa)?;
            Ok(SizeFormulaResult {
                tag: ConstructionTag::Cp1,
                predicted: BigUint::from(t).pow(kappa) * cw,
            })
        }
        SizeQuery::Cr1 {
            lambda,
            q,
            omega,
            kappa,
        } => {
            let inner = expected_size(&SizeQuery::R1 { q, kappa })?;
            let cw = crate::bounds::johnson_1d_cw(lambda, omega, kappa)?;
            Ok(SizeFormulaResult {
                tag: ConstructionTag::Cr1,
                predicted: inner.predicted * cw,
            })
        }
    }
}
