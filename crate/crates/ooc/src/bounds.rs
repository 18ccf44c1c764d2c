//! Size bounds for 2-D OOCs and constant-weight codes, plus an optimality
//! classifier.
//!
//! Five bounds are provided:
//!
//! * the 2-D Johnson bound on general (Lambda x T, omega, kappa) families,
//! * a nonbinary Johnson bound for constant-weight codes over a (T+1)-ary
//!   alphabet (Hamming correlation counts agreements in nonzero symbols),
//! * the bound it induces on AM-OPPW families,
//! * the OPPW specialization `T^kappa`, and
//! * the classical 1-D Johnson bound for binary constant-weight codes.
//!
//! Every nested floor is evaluated innermost-first in exact integer
//! arithmetic; `T^kappa` and the inner products overflow machine words for
//! modest kappa, so everything returns `BigUint` and no floating point is
//! involved anywhere.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::code::{CodeFamily, CodeParams, StructureClass};
use crate::error::{Error, Result};

fn check_kappa_omega(omega: u32, kappa: u32) -> Result<()> {
    if kappa >= omega {
        return Err(Error::InvalidParams(format!(
            "kappa {kappa} must be smaller than omega {omega}"
        )));
    }
    Ok(())
}

/// Innermost-first evaluation of
/// `floor(n_0/d_0 * floor(n_1/d_1 * ... floor(n_k/d_k)))`,
/// with the factor list given outermost-first.
fn nested_floor(factors: &[(BigUint, BigUint)]) -> BigUint {
    let mut acc = BigUint::one();
    for (num, den) in factors.iter().rev() {
        acc = num * acc / den;
    }
    acc
}

/// 2-D Johnson bound:
/// `floor(L/w floor((LT-1)/(w-1) ... floor((LT-k)/(w-k))))`.
pub fn johnson_2d(params: &CodeParams) -> Result<BigUint> {
    let &CodeParams {
        lambda,
        t,
        omega,
        kappa,
    } = params;
    check_kappa_omega(omega, kappa)?;
    if omega as u64 > lambda as u64 * t as u64 {
        return Err(Error::InvalidParams("omega exceeds Lambda*T".into()));
    }
    let lt = lambda as u64 * t as u64;
    let mut factors = vec![(BigUint::from(lambda), BigUint::from(omega))];
    for j in 1..=kappa as u64 {
        factors.push((BigUint::from(lt - j), BigUint::from(omega as u64 - j)));
    }
    Ok(nested_floor(&factors))
}

/// Nonbinary Johnson bound on constant-weight codes of length `lambda`,
/// weight `omega`, Hamming correlation at most `kappa`, over an alphabet of
/// size T + 1:
/// `floor(TL/w floor(T(L-1)/(w-1) ... floor(T(L-k)/(w-k))))`.
pub fn nonbinary_johnson(t: u64, lambda: u32, omega: u32, kappa: u32) -> Result<BigUint> {
    check_kappa_omega(omega, kappa)?;
    if omega > lambda {
        return Err(Error::InvalidParams("omega exceeds length".into()));
    }
    if t < 1 {
        return Err(Error::InvalidParams("alphabet parameter T must be >= 1".into()));
    }
    let mut factors = vec![(t * BigUint::from(lambda), BigUint::from(omega))];
    for j in 1..=kappa {
        factors.push((
            t * BigUint::from(lambda - j),
            BigUint::from(omega - j),
        ));
    }
    Ok(nested_floor(&factors))
}

/// Bound on AM-OPPW families:
/// `floor(L/w floor(T(L-1)/(w-1) ... floor(T(L-k)/(w-k))))`.
pub fn bound_am_oppw(params: &CodeParams) -> Result<BigUint> {
    let &CodeParams {
        lambda,
        t,
        omega,
        kappa,
    } = params;
    check_kappa_omega(omega, kappa)?;
    if omega > lambda {
        return Err(Error::InvalidParams(
            "AM-OPPW requires omega <= Lambda".into(),
        ));
    }
    let mut factors = vec![(BigUint::from(lambda), BigUint::from(omega))];
    for j in 1..=kappa {
        factors.push((
            t as u64 * BigUint::from(lambda - j),
            BigUint::from(omega - j),
        ));
    }
    Ok(nested_floor(&factors))
}

/// Bound on OPPW families: `T^kappa`. OPPW forces full-weight rows, so
/// `omega = Lambda` is a precondition.
pub fn bound_oppw(params: &CodeParams) -> Result<BigUint> {
    check_kappa_omega(params.omega, params.kappa)?;
    if params.omega != params.lambda {
        return Err(Error::InvalidParams(
            "OPPW requires omega = Lambda".into(),
        ));
    }
    Ok(BigUint::from(params.t).pow(params.kappa))
}

/// 1-D Johnson bound for binary constant-weight codes:
/// `floor(L/w floor((L-1)/(w-1) ... floor((L-k)/(w-k))))`.
pub fn johnson_1d_cw(lambda: u32, omega: u32, kappa: u32) -> Result<BigUint> {
    check_kappa_omega(omega, kappa)?;
    if omega > lambda {
        return Err(Error::InvalidParams("omega exceeds length".into()));
    }
    let mut factors = vec![(BigUint::from(lambda), BigUint::from(omega))];
    for j in 1..=kappa {
        factors.push((BigUint::from(lambda - j), BigUint::from(omega - j)));
    }
    Ok(nested_floor(&factors))
}

/// Comparison of an achieved family size against the tightest bound its
/// structure class admits.
#[derive(Debug, Clone)]
pub struct OptimalityReport {
    pub size: usize,
    pub class: StructureClass,
    pub bound_name: &'static str,
    pub bound: BigUint,
    /// size / bound, for trend reporting. A single ratio below 1 says
    /// nothing about asymptotic behavior; ladders of ratios do.
    pub ratio: f64,
    pub optimal: bool,
}

impl std::fmt::Display for OptimalityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "size={} bound={} ({}) ratio={:.4}{}",
            self.size,
            self.bound,
            self.bound_name,
            self.ratio,
            if self.optimal { " OPTIMAL" } else { "" }
        )
    }
}

/// Pick the tightest applicable bound for the family's structure class
/// (OPPW -> T^kappa, AM-OPPW -> the AM-OPPW bound, anything else -> the
/// 2-D Johnson bound) and compare the family size against it.
pub fn optimality_report(family: &CodeFamily) -> Result<OptimalityReport> {
    let params = &family.params;
    let class = family.structure_class();
    let johnson = johnson_2d(params)?;
    let (bound_name, bound) = match class {
        StructureClass::Oppw => {
            let b = bound_oppw(params)?;
            if b <= johnson {
                ("OPPW bound", b)
            } else {
                ("2-D Johnson", johnson)
            }
        }
        StructureClass::AmOppw => {
            let b = bound_am_oppw(params)?;
            if b <= johnson {
                ("AM-OPPW bound", b)
            } else {
                ("2-D Johnson", johnson)
            }
        }
        _ => ("2-D Johnson", johnson),
    };
    let size = family.len();
    let ratio = if bound.is_zero() {
        f64::INFINITY
    } else {
        size as f64 / bound.to_f64().unwrap_or(f64::INFINITY)
    };
    Ok(OptimalityReport {
        size,
        class,
        bound_name,
        bound,
        ratio,
        optimal: BigUint::from(size) == bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda: u32, t: u32, omega: u32, kappa: u32) -> CodeParams {
        CodeParams::new(lambda, t, omega, kappa).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Classical binary Johnson bound as an independent recursion,
    /// A(n, w, k) = floor(n/w * A(n-1, w-1, k-1)), A(n, w, 0) = floor(n/w).
    fn binary_johnson_recursive(n: u64, w: u64, k: u64) -> BigUint {
        if k == 0 {
            return big(n / w);
        }
        big(n) * binary_johnson_recursive(n - 1, w - 1, k - 1) / big(w)
    }

    #[test]
    fn johnson_2d_examples() {
        assert_eq!(johnson_2d(&params(3, 5, 3, 1)).unwrap(), big(7));
        // degenerate binary case: Lambda = omega, T = 1, kappa = omega - 1
        assert_eq!(johnson_2d(&params(3, 1, 3, 2)).unwrap(), big(1));
        // OPPW-bound consistency at Lambda = T = omega, T prime, kappa = 1:
        // the dedicated OPPW bound gives exactly T
        for t in [3u32, 5, 7, 11] {
            assert_eq!(bound_oppw(&params(t, t, t, 1)).unwrap(), big(t as u64));
        }
    }

    #[test]
    fn nonbinary_examples() {
        assert_eq!(nonbinary_johnson(4, 5, 3, 1).unwrap(), big(53));
        // binary reduction
        for lambda in 2..=20u32 {
            for omega in 1..=lambda {
                for kappa in 0..omega {
                    assert_eq!(
                        nonbinary_johnson(1, lambda, omega, kappa).unwrap(),
                        binary_johnson_recursive(lambda as u64, omega as u64, kappa as u64),
                        "lambda={lambda} omega={omega} kappa={kappa}"
                    );
                }
            }
        }
        // Singleton reduction: Lambda = omega gives T^(kappa+1)
        for t in 1..=16u64 {
            for kappa in 0..=4u32 {
                let lambda = kappa + 1;
                assert_eq!(
                    nonbinary_johnson(t, lambda, lambda, kappa).unwrap(),
                    big(t).pow(kappa + 1)
                );
            }
        }
    }

    #[test]
    fn am_oppw_examples() {
        assert_eq!(bound_am_oppw(&params(7, 5, 3, 1)).unwrap(), big(35));
        // kappa = 0 collapses to floor(Lambda/omega)
        assert_eq!(bound_am_oppw(&params(7, 5, 3, 0)).unwrap(), big(2));
    }

    #[test]
    fn am_oppw_never_exceeds_johnson_and_appendix_chain_holds() {
        for lambda in 2..=12u32 {
            for t in 2..=12u32 {
                for omega in 2..=lambda {
                    for kappa in 0..omega.min(4) {
                        let p = params(lambda, t, omega, kappa);
                        let am = bound_am_oppw(&p).unwrap();
                        let j2 = johnson_2d(&p).unwrap();
                        assert!(am <= j2, "{p:?}");
                        // floor((1/T) * nonbinary) <= AM-OPPW bound
                        let nb = nonbinary_johnson(t as u64, lambda, omega, kappa).unwrap();
                        assert!(nb / t as u64 <= am, "{p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn oppw_examples() {
        assert_eq!(bound_oppw(&params(3, 5, 3, 1)).unwrap(), big(5));
        assert_eq!(bound_oppw(&params(3, 5, 3, 0)).unwrap(), big(1));
        assert!(bound_oppw(&params(4, 5, 3, 1)).is_err());
    }

    #[test]
    fn johnson_1d_examples() {
        assert_eq!(johnson_1d_cw(7, 3, 1).unwrap(), big(7));
        assert_eq!(johnson_1d_cw(5, 5, 2).unwrap(), big(1));
        assert_eq!(johnson_1d_cw(13, 4, 1).unwrap(), big(13));
    }

    #[test]
    fn bounds_monotone_in_lambda_and_t() {
        for omega in 2..=5u32 {
            for kappa in 0..omega.min(3) {
                for lambda in omega..=11 {
                    for t in 2..=11u32 {
                        let p = params(lambda, t, omega, kappa);
                        let j = johnson_2d(&p).unwrap();
                        let a = bound_am_oppw(&p).unwrap();
                        if lambda < 11 {
                            let pl = params(lambda + 1, t, omega, kappa);
                            assert!(johnson_2d(&pl).unwrap() >= j);
                            assert!(bound_am_oppw(&pl).unwrap() >= a);
                        }
                        let pt = params(lambda, t + 1, omega, kappa);
                        assert!(johnson_2d(&pt).unwrap() >= j);
                        assert!(bound_am_oppw(&pt).unwrap() >= a);
                    }
                }
            }
        }
    }
}
