//! Arithmetic in `GF(p)` and `GF(p^m)` in polynomial basis.
//!
//! A [`FieldCtx`] owns the modulus and the lazily built lookup tables. Elements
//! are plain coefficient vectors (ascending degree) and carry no reference to
//! their context; operations assume their operands were produced by the same
//! context, and [`FieldCtx::check`] validates foreign input at API boundaries.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fields up to this size get the exponent and quadratic-character tables.
const TABLE_LIMIT: u64 = 1 << 20;

/// An element of the prime field, `0 <= value < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeResidue(u32);

impl PrimeResidue {
    pub fn new(value: u32, p: u32) -> Result<Self> {
        if value >= p {
            return Err(Error::CoefficientOutOfRange {
                value: value as u64,
                p,
            });
        }
        Ok(PrimeResidue(value))
    }

    /// Reduces an arbitrary integer modulo `p`.
    pub fn reduce(value: i64, p: u32) -> Self {
        PrimeResidue(value.rem_euclid(p as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for PrimeResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Element of `GF(p^m)`: coefficients of a polynomial of degree `< m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

// ---------------------------------------------------------------------------
// prime field helpers

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn fp_pow(base: u32, mut e: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut b = base as u64 % p64;
    let mut acc = 1u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        e >>= 1;
    }
    acc as u32
}

/// Inverse in `GF(p)`; `x` must be nonzero.
pub fn fp_inv(x: u32, p: u32) -> u32 {
    debug_assert!(!x.is_multiple_of(p));
    fp_pow(x, (p - 2) as u64, p)
}

/// Quadratic character of the prime field (Legendre symbol), with `eta(0) = 0`.
pub fn legendre(x: i64, p: u32) -> i8 {
    let r = x.rem_euclid(p as i64) as u32;
    if r == 0 {
        return 0;
    }
    if fp_pow(r, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

/// Parses the comma separated ascending-coefficient modulus format, e.g. `"2,2,2,0,1,2,0,0,1"`.
pub fn parse_modulus(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| Error::InvalidArgument(format!("bad modulus coefficient {t:?}: {e}")))
        })
        .collect()
}

pub fn format_modulus(modulus: &[u32]) -> String {
    modulus
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------------
// polynomials over GF(p), ascending coefficients, used for modulus validation

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p) as u64;
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
        for (i, &bc) in b.iter().enumerate() {
            let t = (c * bc as u64) % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - t) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(&prod, f, p)
}

/// Rabin's test: a monic `f` of degree `m` is irreducible iff it shares no
/// factor with `x^(p^i) - x` for `1 <= i <= m/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    let x = vec![0, 1];
    let mut h = poly_rem(&x, f, p);
    for _ in 1..=m / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u32];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if poly_gcd(f, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------

/// Immutable description of `GF(p^m)`.
pub struct FieldCtx {
    p: u32,
    m: usize,
    modulus: Vec<u32>,
    order: u64,
    /// `Tr(x^i)` for `i < m`, computed once by the Frobenius sum.
    trace_basis: Vec<u32>,
    primitive: OnceLock<bool>,
    exp_table: OnceLock<Vec<u32>>,
    eta_table: OnceLock<Vec<i8>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FieldCtx {
    /// Builds `GF(p^m)`. Without an explicit modulus the lexicographically
    /// smallest (ascending coefficient tuple) monic irreducible is used.
    pub fn new(p: u32, m: usize, modulus: Option<&[u32]>) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        if m == 0 {
            return Err(Error::InvalidDegree);
        }
        let order = (p as u64).checked_pow(m as u32).ok_or(Error::TooLarge {
            size: u64::MAX,
            bound: u64::MAX,
        })?;
        let modulus = match modulus {
            Some(f) => {
                if f.len() != m + 1 {
                    return Err(Error::ModulusLength {
                        expected: m + 1,
                        got: f.len(),
                    });
                }
                if let Some(&c) = f.iter().find(|&&c| c >= p) {
                    return Err(Error::CoefficientOutOfRange { value: c as u64, p });
                }
                if f[m] != 1 {
                    return Err(Error::NotMonic);
                }
                if !is_irreducible(f, p) {
                    return Err(Error::Reducible(f.to_vec()));
                }
                f.to_vec()
            }
            None => smallest_irreducible(p, m),
        };
        let mut ctx = FieldCtx {
            p,
            m,
            modulus,
            order,
            trace_basis: Vec::new(),
            primitive: OnceLock::new(),
            exp_table: OnceLock::new(),
            eta_table: OnceLock::new(),
        };
        let mut tb = Vec::with_capacity(m);
        for i in 0..m {
            let mut basis = vec![0u32; m];
            basis[i] = 1;
            let t = ctx.trace(&FieldElement { coeffs: basis })?;
            tb.push(t.value());
        }
        ctx.trace_basis = tb;
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements, `p^m`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Whether the primitivity of `x` has been checked yet.
    pub fn generator_order_checked(&self) -> bool {
        self.primitive.get().is_some()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_prime(1)
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_prime(&self, c: i64) -> FieldElement {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = c.rem_euclid(self.p as i64) as u32;
        FieldElement { coeffs }
    }

    /// The class of `x` modulo the modulus.
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            self.from_prime(-(self.modulus[0] as i64))
        } else {
            let mut coeffs = vec![0; self.m];
            coeffs[1] = 1;
            FieldElement { coeffs }
        }
    }

    /// Validates a coefficient vector and wraps it as an element.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m {
            return Err(Error::CtxMismatch);
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::CoefficientOutOfRange {
                value: c as u64,
                p: self.p,
            });
        }
        Ok(FieldElement {
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn check(&self, x: &FieldElement) -> Result<()> {
        if x.coeffs.len() != self.m || x.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::CtxMismatch);
        }
        Ok(())
    }

    /// Position of `x` in the enumeration order (lexicographic on the
    /// ascending coefficient tuple, so `coeffs[0]` is most significant).
    pub fn index_of(&self, x: &FieldElement) -> u64 {
        x.coeffs
            .iter()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn element_at(&self, mut index: u64) -> FieldElement {
        debug_assert!(index < self.order);
        let mut coeffs = vec![0u32; self.m];
        for c in coeffs.iter_mut().rev() {
            *c = (index % self.p as u64) as u32;
            index /= self.p as u64;
        }
        FieldElement { coeffs }
    }

    /// All `p^m` elements in canonical order, starting with zero.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |i| self.element_at(i))
    }

    /// Nonzero elements in canonical order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.order).map(move |i| self.element_at(i))
    }

    pub fn is_prime_field_element(&self, x: &FieldElement) -> bool {
        x.coeffs[1..].iter().all(|&c| c == 0)
    }

    // -- arithmetic ---------------------------------------------------------

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + p - y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p;
        FieldElement {
            coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, c: u32, a: &FieldElement) -> FieldElement {
        let p = self.p as u64;
        let c = c as u64 % p;
        FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .map(|&x| (x as u64 * c % p) as u32)
                .collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.m;
        let p = self.p as u64;
        let mut r = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                r[i + j] = (r[i + j] + x as u64 * y as u64) % p;
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = r[d];
            if c == 0 {
                continue;
            }
            // x^m = -(f_0 + ... + f_{m-1} x^{m-1})
            for k in 0..m {
                let f = self.modulus[k] as u64;
                r[d - m + k] = (r[d - m + k] + c * ((p - f) % p)) % p;
            }
        }
        FieldElement {
            coeffs: r[..m].iter().map(|&c| c as u32).collect(),
        }
    }

    pub fn square(&self, a: &FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    fn pow_u64(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^e` for any integer exponent; negative exponents need `a != 0`.
    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        if a.is_zero() {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(self.zero()),
                _ => Err(Error::DivisionByZero),
            };
        }
        let group = self.order - 1;
        let e = (e as i128).rem_euclid(group as i128) as u64;
        Ok(self.pow_u64(a, e))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_u64(a, self.order - 2))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: &FieldElement) -> FieldElement {
        self.pow_u64(a, self.p as u64)
    }

    // -- trace and subfields ------------------------------------------------

    /// Absolute trace as the Frobenius orbit sum `x + x^p + ... + x^(p^(m-1))`.
    pub fn trace(&self, x: &FieldElement) -> Result<PrimeResidue> {
        let mut sum = self.zero();
        let mut y = x.clone();
        for i in 0..self.m {
            sum = self.add(&sum, &y);
            if i + 1 < self.m {
                y = self.frobenius(&y);
            }
        }
        if !self.is_prime_field_element(&sum) {
            return Err(Error::Internal(format!(
                "Frobenius sum {:?} is not in the prime field",
                sum.coeffs
            )));
        }
        Ok(PrimeResidue(sum.coeffs[0]))
    }

    /// Trace via the precomputed traces of the power basis; agrees with
    /// [`FieldCtx::trace`] by linearity.
    pub fn trace_linear(&self, x: &FieldElement) -> u32 {
        let p = self.p as u64;
        let s = x
            .coeffs
            .iter()
            .zip(&self.trace_basis)
            .fold(0u64, |acc, (&c, &t)| acc + c as u64 * t as u64);
        (s % p) as u32
    }

    /// `Tr(x^i)` for `i < m`.
    pub fn trace_basis(&self) -> &[u32] {
        &self.trace_basis
    }

    /// True iff `x` lies in the subfield `GF(p^s)`, i.e. `x^(p^s) = x`.
    pub fn in_subfield(&self, x: &FieldElement, s: usize) -> Result<bool> {
        if s == 0 || !self.m.is_multiple_of(s) {
            return Err(Error::NotADivisor { s, m: self.m });
        }
        let mut y = x.clone();
        for _ in 0..s {
            y = self.frobenius(&y);
        }
        Ok(&y == x)
    }

    /// Smallest `s` dividing `m` with `x` in `GF(p^s)`.
    pub fn degree_of(&self, x: &FieldElement) -> usize {
        (1..=self.m)
            .filter(|s| self.m.is_multiple_of(*s))
            .find(|&s| self.in_subfield(x, s).unwrap_or(false))
            .unwrap_or(self.m)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: &FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut ord = self.order - 1;
        for q in prime_factors(self.order - 1) {
            while ord.is_multiple_of(q) && self.pow_u64(x, ord / q) == self.one() {
                ord /= q;
            }
        }
        Ok(ord)
    }

    // -- generator powers ---------------------------------------------------

    /// Whether the class of `x` generates the multiplicative group. Checked
    /// once via `x^((p^m-1)/q) != 1` for every prime `q | p^m - 1`.
    pub fn is_generator_primitive(&self) -> bool {
        *self.primitive.get_or_init(|| {
            let g = self.generator();
            if g.is_zero() {
                return false;
            }
            let n = self.order - 1;
            let one = self.one();
            prime_factors(n)
                .into_iter()
                .all(|q| self.pow_u64(&g, n / q) != one)
        })
    }

    fn exp_table(&self) -> Option<&[u32]> {
        if self.order > TABLE_LIMIT {
            return None;
        }
        Some(self.exp_table.get_or_init(|| {
            let g = self.generator();
            let mut out = Vec::with_capacity((self.order - 1) as usize);
            let mut cur = self.one();
            for _ in 0..self.order - 1 {
                out.push(self.index_of(&cur) as u32);
                cur = self.mul(&cur, &g);
            }
            out
        }))
    }

    /// `beta^k` where `beta` is the class of `x`, which must be primitive.
    pub fn element_from_exponent(&self, k: i64) -> Result<FieldElement> {
        if !self.is_generator_primitive() {
            return Err(Error::NotPrimitive);
        }
        let e = (k as i128).rem_euclid((self.order - 1) as i128) as u64;
        match self.exp_table() {
            Some(t) => Ok(self.element_at(t[e as usize] as u64)),
            None => Ok(self.pow_u64(&self.generator(), e)),
        }
    }

    // -- quadratic character ------------------------------------------------

    /// Quadratic character table indexed by [`FieldCtx::index_of`], built by
    /// squaring every element.
    fn eta_table(&self) -> Option<&[i8]> {
        if self.order > TABLE_LIMIT {
            return None;
        }
        Some(self.eta_table.get_or_init(|| {
            let mut t = vec![-1i8; self.order as usize];
            t[0] = 0;
            for x in self.nonzero_elements() {
                let sq = self.square(&x);
                t[self.index_of(&sq) as usize] = 1;
            }
            t
        }))
    }

    /// Quadratic character `eta_m` with `eta_m(0) = 0`.
    pub fn eta(&self, x: &FieldElement) -> i8 {
        match self.eta_table() {
            Some(t) => t[self.index_of(x) as usize],
            None => {
                if x.is_zero() {
                    return 0;
                }
                let r = self.pow_u64(x, (self.order - 1) / 2);
                if r == self.one() {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    irreducibles(p, m)
        .next()
        .expect("an irreducible polynomial of every degree exists")
}

/// Monic irreducibles of degree `m` in lexicographic order of the ascending coefficients.
fn irreducibles(p: u32, m: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(m as u32);
    (0..total).filter_map(move |idx| {
        // idx enumerates (c_0, ..., c_{m-1}) lexicographically with c_0 most significant
        let mut f = vec![0u32; m + 1];
        let mut k = idx;
        for i in (0..m).rev() {
            f[i] = (k % p as u64) as u32;
            k /= p as u64;
        }
        f[m] = 1;
        is_irreducible(&f, p).then_some(f)
    })
}

impl FieldCtx {
    /// `GF(p^m)` modulo the lexicographically smallest irreducible whose root
    /// generates the multiplicative group.
    pub fn with_primitive_modulus(p: u32, m: usize) -> Result<FieldCtx> {
        FieldCtx::new(p, m, None)?;
        for f in irreducibles(p, m) {
            let ctx = FieldCtx::new(p, m, Some(&f))?;
            if ctx.is_generator_primitive() {
                return Ok(ctx);
            }
        }
        Err(Error::NotPrimitive)
    }
}
