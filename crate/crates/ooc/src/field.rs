//! Exact arithmetic in GF(p) and GF(p^m).
//!
//! Fields are built from a prime `p` and an extension degree `m`. For `m > 1`
//! the field is represented as Z_p[x] modulo a monic primitive polynomial of
//! degree `m`; the primitive element is the residue of `x` itself. For `m = 1`
//! the primitive element is the smallest primitive root mod `p`.
//!
//! Elements are stored as integer indices: the element with coefficient
//! vector (c_0, ..., c_{m-1}) has index `sum c_i p^i`, so index 0 is zero and
//! index 1 is one. Multiplication goes through log/antilog tables whenever
//! `q <= 2^16`; the polynomial route is kept alongside and the two are
//! required to agree.

use crate::error::{Error, Result};

/// Default ceiling on the field size `q = p^m`.
pub const DEFAULT_FIELD_CEILING: u64 = 1 << 20;

/// Largest `q` for which log/antilog tables are built.
const TABLE_LIMIT: u64 = 1 << 16;

/// A field element, stored as its integer index in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Static description of a field: the prime, the degree, and the modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    /// Coefficients of the monic modulus, index 0 = constant term,
    /// length m + 1. Trivial (`[0, 1]`) when m = 1.
    pub modulus: Vec<u64>,
}

/// A fully constructed field GF(p^m).
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    q: u64,
    alpha: Elem,
    /// log[i] = k with alpha^k = element i, for i != 0; log[0] unused.
    log: Option<Vec<u32>>,
    /// antilog[k] = index of alpha^k, length q - 1.
    antilog: Option<Vec<u32>>,
}

/// A multiplicative subgroup of order `T`, listed in generator-power order.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub order: u64,
    pub generator: Elem,
    /// beta^0, beta^1, ..., beta^{T-1}.
    pub elements: Vec<Elem>,
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_mul(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1u64 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, n);
        }
        base = mod_mul(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Prime factorization by trial division (inputs here are at most ~2^20).
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Build GF(p^m) with the default size ceiling.
///
/// The modulus for m > 1 is the lexicographically smallest monic primitive
/// polynomial of degree m (coefficient vectors compared via their integer
/// index), so repeated runs always produce the same field.
pub fn build_field(p: u64, m: u32) -> Result<Field> {
    build_field_with(p, m, None, DEFAULT_FIELD_CEILING)
}

/// Build GF(p^m) with an explicit modulus and/or ceiling.
///
/// A supplied modulus must be monic of degree m and primitive; it is
/// validated, not trusted.
pub fn build_field_with(
    p: u64,
    m: u32,
    modulus: Option<Vec<u64>>,
    ceiling: u64,
) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m < 1 {
        return Err(Error::InvalidParams("extension degree must be >= 1".into()));
    }
    let q = (p as u128).checked_pow(m).filter(|&q| q <= ceiling as u128);
    let q = match q {
        Some(q) => q as u64,
        None => {
            return Err(Error::CeilingExceeded {
                size: (p as u128).saturating_pow(m),
                ceiling: ceiling as u128,
            })
        }
    };

    let (spec, alpha) = if m == 1 {
        let alpha = smallest_primitive_root(p);
        (
            FieldSpec {
                p,
                m,
                modulus: vec![0, 1],
            },
            Elem(alpha as u32),
        )
    } else {
        let modulus = match modulus {
            Some(md) => {
                validate_modulus(p, m, q, &md)?;
                md
            }
            None => search_primitive_modulus(p, m, q)?,
        };
        // alpha = x, coefficient vector (0, 1, 0, ...), index p.
        (FieldSpec { p, m, modulus }, Elem(p as u32))
    };

    let mut field = Field {
        spec,
        q,
        alpha,
        log: None,
        antilog: None,
    };
    if q <= TABLE_LIMIT {
        field.build_tables();
    }
    Ok(field)
}

fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = factorize(p - 1);
    'cand: for a in 2..p {
        for &(r, _) in &factors {
            if mod_pow(a, (p - 1) / r, p) == 1 {
                continue 'cand;
            }
        }
        return a;
    }
    unreachable!("every prime field has a primitive root")
}

fn validate_modulus(p: u64, m: u32, q: u64, modulus: &[u64]) -> Result<()> {
    if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
        return Err(Error::InvalidParams(format!(
            "modulus must be monic of degree {m}"
        )));
    }
    if modulus.iter().any(|&c| c >= p) {
        return Err(Error::InvalidParams(
            "modulus coefficients must lie in [0, p)".into(),
        ));
    }
    if companion_root_order_is_max(p, m, q, modulus) {
        Ok(())
    } else {
        Err(Error::InvalidParams(
            "modulus is not primitive: companion root order is not q - 1".into(),
        ))
    }
}

fn search_primitive_modulus(p: u64, m: u32, q: u64) -> Result<Vec<u64>> {
    // Candidate low coefficients in index order; the companion-root order
    // test both rejects reducible moduli and enforces primitivity.
    for low in 1..q {
        let mut md = decompose(low, p, m as usize);
        md.push(1);
        if companion_root_order_is_max(p, m, q, &md) {
            return Ok(md);
        }
    }
    Err(Error::InvalidParams(format!(
        "no primitive polynomial of degree {m} over GF({p}) found"
    )))
}

/// True iff the residue of x modulo `modulus` has multiplicative order q - 1.
///
/// Checked as x^(q-1) = 1 together with x^((q-1)/r) != 1 for every prime
/// r | q - 1. An order of exactly q - 1 forces the quotient ring to be a
/// field, so irreducibility need not be tested separately.
fn companion_root_order_is_max(p: u64, m: u32, q: u64, modulus: &[u64]) -> bool {
    let x = poly_x(m as usize);
    let one = poly_one(m as usize);
    if poly_pow_mod(&x, q - 1, modulus, p) != one {
        return false;
    }
    for &(r, _) in &factorize(q - 1) {
        if poly_pow_mod(&x, (q - 1) / r, modulus, p) == one {
            return false;
        }
    }
    true
}

// Fixed-width polynomial helpers over Z_p used during construction
// (coefficient vectors of length m, degree-reduced).

fn poly_x(m: usize) -> Vec<u64> {
    let mut v = vec![0; m];
    if m > 1 {
        v[1] = 1;
    }
    v
}

fn poly_one(m: usize) -> Vec<u64> {
    let mut v = vec![0; m];
    v[0] = 1;
    v
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = a.len();
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // Reduce: x^m = -(modulus without leading term).
    for d in (m..2 * m - 1).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..m {
            let sub = (c * modulus[k]) % p;
            prod[d - m + k] = (prod[d - m + k] + p - sub) % p;
        }
    }
    prod.truncate(m);
    prod
}

fn poly_pow_mod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let m = base.len();
    let mut acc = poly_one(m);
    let mut b = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

fn decompose(mut idx: u64, p: u64, m: usize) -> Vec<u64> {
    let mut v = vec![0; m];
    for c in v.iter_mut() {
        *c = idx % p;
        idx /= p;
    }
    v
}

fn compose(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Field {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    /// Field size q = p^m.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The primitive element alpha.
    pub fn alpha(&self) -> Elem {
        self.alpha
    }

    pub fn has_tables(&self) -> bool {
        self.log.is_some()
    }

    /// The element with the given index in [0, q).
    pub fn elem(&self, index: u64) -> Elem {
        assert!(index < self.q, "element index {index} out of range");
        Elem(index as u32)
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q as u32).map(Elem)
    }

    /// Coefficient vector of an element, index 0 = constant term.
    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        decompose(x.0 as u64, self.spec.p, self.spec.m as usize)
    }

    pub fn elem_from_coeffs(&self, coeffs: &[u64]) -> Elem {
        assert!(coeffs.len() <= self.spec.m as usize);
        assert!(coeffs.iter().all(|&c| c < self.spec.p));
        Elem(compose(coeffs, self.spec.p) as u32)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut log = vec![u32::MAX; q];
        let mut antilog = vec![0u32; q - 1];
        let mut x = Elem::ONE;
        for k in 0..q - 1 {
            antilog[k] = x.0;
            log[x.0 as usize] = k as u32;
            x = self.mul_poly(x, self.alpha);
        }
        debug_assert_eq!(self.mul_poly(x, Elem::ONE), Elem::ONE, "alpha order != q-1");
        self.log = Some(log);
        self.antilog = Some(antilog);
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Elem(((a.0 as u64 + b.0 as u64) % p) as u32);
        }
        let mut idx = 0u64;
        let (mut ai, mut bi) = (a.0 as u64, b.0 as u64);
        let mut place = 1u64;
        for _ in 0..self.spec.m {
            idx += ((ai % p + bi % p) % p) * place;
            ai /= p;
            bi /= p;
            place *= p;
        }
        Elem(idx as u32)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Elem(((p - a.0 as u64) % p) as u32);
        }
        let mut idx = 0u64;
        let mut ai = a.0 as u64;
        let mut place = 1u64;
        for _ in 0..self.spec.m {
            idx += ((p - ai % p) % p) * place;
            ai /= p;
            place *= p;
        }
        Elem(idx as u32)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// Product via log/antilog tables when available, else the polynomial route.
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match (&self.log, &self.antilog) {
            (Some(log), Some(antilog)) => {
                let k = (log[a.0 as usize] as u64 + log[b.0 as usize] as u64) % (self.q - 1);
                Elem(antilog[k as usize])
            }
            _ => self.mul_poly(a, b),
        }
    }

    /// Product by coefficient-vector multiplication with modulus reduction.
    pub fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Elem(mod_mul(a.0 as u64, b.0 as u64, p) as u32);
        }
        let av = self.coeffs(a);
        let bv = self.coeffs(b);
        let prod = poly_mul_mod(&av, &bv, &self.spec.modulus, p);
        Elem(compose(&prod, p) as u32)
    }

    pub fn pow(&self, base: Elem, exp: u64) -> Elem {
        if exp == 0 {
            return Elem::ONE;
        }
        if base.is_zero() {
            return Elem::ZERO;
        }
        if let (Some(log), Some(antilog)) = (&self.log, &self.antilog) {
            let k = mod_mul(log[base.0 as usize] as u64, exp % (self.q - 1), self.q - 1);
            return Elem(antilog[k as usize]);
        }
        let mut acc = Elem::ONE;
        let mut b = base;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, b);
            }
            b = self.mul_poly(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Discrete log base alpha; `None` for zero.
    pub fn discrete_log(&self, x: Elem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        if let Some(log) = &self.log {
            return Some(log[x.0 as usize] as u64);
        }
        let mut acc = Elem::ONE;
        for k in 0..self.q - 1 {
            if acc == x {
                return Some(k);
            }
            acc = self.mul(acc, self.alpha);
        }
        None
    }

    /// Smallest e >= 1 with x^e = 1, via the factorization of q - 1.
    pub fn element_order(&self, x: Elem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut order = self.q - 1;
        for (r, e) in factorize(self.q - 1) {
            for _ in 0..e {
                if order % r == 0 && self.pow(x, order / r) == Elem::ONE {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    /// The multiplicative subgroup of order T, T | q - 1, generated by
    /// alpha^((q-1)/T), with elements listed in exponent order.
    pub fn subgroup(&self, t: u64) -> Result<Subgroup> {
        if t < 1 || (self.q - 1) % t != 0 {
            return Err(Error::NotADivisor {
                t,
                group_order: self.q - 1,
            });
        }
        let generator = self.pow(self.alpha, (self.q - 1) / t);
        let mut elements = Vec::with_capacity(t as usize);
        let mut x = Elem::ONE;
        for _ in 0..t {
            elements.push(x);
            x = self.mul(x, generator);
        }
        debug_assert_eq!(x, Elem::ONE);
        Ok(Subgroup {
            order: t,
            generator,
            elements,
        })
    }

    /// Horner evaluation of a polynomial given by its coefficient list
    /// (index 0 = constant term).
    pub fn poly_eval(&self, coeffs: &[Elem], x: Elem) -> Elem {
        assert!(!coeffs.is_empty(), "empty coefficient list");
        let mut acc = Elem::ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_modulus_is_the_expected_primitive_quadratic() {
        // x^2 + x + 2 over GF(3)
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.spec().modulus, vec![2, 1, 1]);
        assert_eq!(f.element_order(f.alpha()).unwrap(), 8);
    }

    #[test]
    fn gf7_smallest_primitive_root() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.alpha(), Elem(3));
        // brute-force check that 3 really is the smallest
        for a in 2..7u64 {
            let mut order = 1;
            let mut x = a;
            while x != 1 {
                x = x * a % 7;
                order += 1;
            }
            if order == 6 {
                assert_eq!(a, 3);
                break;
            }
        }
    }

    #[test]
    fn composite_p_rejected() {
        assert_eq!(build_field(4, 1).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn ceiling_enforced() {
        assert!(matches!(
            build_field_with(2, 30, None, DEFAULT_FIELD_CEILING),
            Err(Error::CeilingExceeded { .. })
        ));
    }

    #[test]
    fn user_modulus_validated() {
        // x^2 + 1 over GF(3) is irreducible but not primitive (root order 4)
        assert!(build_field_with(3, 2, Some(vec![1, 0, 1]), DEFAULT_FIELD_CEILING).is_err());
        // the paper's quadratic is accepted
        let f = build_field_with(3, 2, Some(vec![2, 1, 1]), DEFAULT_FIELD_CEILING).unwrap();
        assert_eq!(f.q(), 9);
    }

    #[test]
    fn subgroup_gf7() {
        let f = build_field(7, 1).unwrap();
        let h = f.subgroup(3).unwrap();
        assert_eq!(h.generator, Elem(2));
        assert_eq!(h.elements, vec![Elem(1), Elem(2), Elem(4)]);
        assert_eq!(f.subgroup(6).unwrap().generator, f.alpha());
        assert_eq!(
            f.subgroup(4).unwrap_err(),
            Error::NotADivisor { t: 4, group_order: 6 }
        );
    }

    #[test]
    fn subgroup_closed_and_distinct() {
        for (p, m, t) in [(7, 1, 3), (3, 2, 4), (2, 3, 7), (13, 1, 4)] {
            let f = build_field(p, m).unwrap();
            let h = f.subgroup(t).unwrap();
            assert_eq!(h.elements.len(), t as usize);
            let set: std::collections::HashSet<_> = h.elements.iter().collect();
            assert_eq!(set.len(), t as usize);
            for &a in &h.elements {
                for &b in &h.elements {
                    assert!(set.contains(&f.mul(a, b)));
                }
            }
        }
    }

    #[test]
    fn poly_eval_examples() {
        // the modulus root evaluates its own polynomial to zero
        let f = build_field(3, 2).unwrap();
        let coeffs = vec![f.elem(2), f.elem(1), f.elem(1)];
        assert_eq!(f.poly_eval(&coeffs, f.alpha()), Elem::ZERO);
        // constants
        assert_eq!(f.poly_eval(&[f.elem(5 % 9)], f.alpha()), f.elem(5 % 9));
        // x^3 + 2x^2 + 5x + 3 at x = 2 over GF(7): 29 = 1 mod 7
        let g = build_field(7, 1).unwrap();
        let coeffs = vec![g.elem(3), g.elem(5), g.elem(2), g.elem(1)];
        assert_eq!(g.poly_eval(&coeffs, g.elem(2)), g.elem(1));
    }

    #[test]
    fn element_orders() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.element_order(Elem::ONE).unwrap(), 1);
        assert_eq!(f.element_order(f.alpha()).unwrap(), 6);
        assert_eq!(f.element_order(f.elem(2)).unwrap(), 3);
        assert_eq!(f.element_order(Elem::ZERO).unwrap_err(), Error::ZeroElement);
        // cross-check against exhaustive powers
        for a in 1..7u64 {
            let mut order = 1;
            let mut x = a;
            while x != 1 {
                x = x * a % 7;
                order += 1;
            }
            assert_eq!(f.element_order(f.elem(a)).unwrap(), order);
        }
    }

    #[test]
    fn fermat_lagrange_exhaustive_small_fields() {
        for (p, m) in [(2, 8), (3, 5), (5, 3), (251, 1)] {
            let f = build_field(p, m).unwrap();
            for x in f.elements().skip(1) {
                assert_eq!(f.pow(x, f.q() - 1), Elem::ONE);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, m) in [(2, 2), (3, 2), (7, 1), (2, 4), (5, 2)] {
            let f = build_field(p, m).unwrap();
            let els: Vec<Elem> = f.elements().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for &c in &els {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            }
        }
    }

    #[test]
    fn discrete_log_round_trip() {
        let f = build_field(3, 4).unwrap(); // q = 81, tables present
        assert!(f.has_tables());
        for k in 0..f.q() - 1 {
            assert_eq!(f.discrete_log(f.pow(f.alpha(), k)), Some(k));
        }
        assert_eq!(f.discrete_log(Elem::ZERO), None);
    }

    #[test]
    fn table_and_poly_multiplication_agree() {
        for (p, m) in [(3, 2), (2, 4), (5, 2), (7, 2)] {
            let f = build_field(p, m).unwrap();
            assert!(f.has_tables());
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b));
                }
            }
        }
    }
}
