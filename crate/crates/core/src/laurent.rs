//! Exact Laurent polynomials in the variables `X_v^{±1}` with coefficients in
//! `Z[A_v]`, one `X` and one `A` variable per vertex.
//!
//! A [`LaurentPoly`] stores one integer per joint monomial `A^a · X^x`. The
//! storage key is the concatenation `x ++ a`, so sorting keys sorts terms
//! lexicographically by `X`-exponents with ties broken by `A`-exponents.
//! [`LaurentPoly::coefficient_of`] and [`LaurentPoly::x_terms`] give the
//! grouped view, where each `X`-monomial carries a [`CoefPoly`].
//!
//! Coefficients are `i64` and every operation is checked: overflow is
//! reported as [`Error::IntegerOverflow`] instead of wrapping. Swapping in a
//! big-integer type means replacing the `i64` coefficient and the
//! `checked_*` calls in this module; nothing outside it depends on the width.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexMultiset};

type Key = SmallVec<[i32; 16]>;
type AKey = SmallVec<[u32; 8]>;

fn overflow<T>(x: Option<T>) -> Result<T> {
    x.ok_or(Error::IntegerOverflow)
}

fn check_universe(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::UniverseMismatch(a, b))
    }
}

/// A polynomial in the coefficient variables `A_v`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoefPoly {
    nvars: usize,
    terms: BTreeMap<AKey, i64>,
}

impl CoefPoly {
    pub fn zero(nvars: usize) -> Self {
        CoefPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0 {
            p.terms.insert(smallvec::smallvec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `A_v`.
    pub fn a(nvars: usize, v: Vertex) -> Self {
        let mut key: AKey = smallvec::smallvec![0; nvars];
        key[v.index()] = 1;
        CoefPoly { nvars, terms: BTreeMap::from([(key, 1)]) }
    }

    /// `∏_{v ∈ m} A_v`, with multiplicity.
    pub fn a_product(nvars: usize, m: &VertexMultiset) -> Self {
        let mut key: AKey = smallvec::smallvec![0; nvars];
        for (v, &k) in m {
            key[v.index()] += k;
        }
        CoefPoly { nvars, terms: BTreeMap::from([(key, 1)]) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The integer value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (k, &c) = self.terms.iter().next().unwrap();
                k.iter().all(|&e| e == 0).then_some(c)
            }
            _ => None,
        }
    }

    /// `(A-exponents, coefficient)` in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_universe(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            let slot = out.terms.entry(k.clone()).or_insert(0);
            *slot = overflow(slot.checked_add(c))?;
            if *slot == 0 {
                out.terms.remove(k);
            }
        }
        Ok(out)
    }

    pub fn try_neg(&self) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(k, &c)| Ok((k.clone(), overflow(c.checked_neg())?)))
            .collect::<Result<_>>()?;
        Ok(CoefPoly { nvars: self.nvars, terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_universe(self.nvars, other.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &other.terms {
                let key = ka
                    .iter()
                    .zip(kb)
                    .map(|(x, y)| overflow(x.checked_add(*y)))
                    .collect::<Result<AKey>>()?;
                let c = overflow(ca.checked_mul(cb))?;
                let slot = out.terms.entry(key).or_insert(0);
                *slot = overflow(slot.checked_add(c))?;
            }
        }
        out.terms.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// Renders as `c·A_a^e·…` terms joined by `+`/`-`, using vertex labels.
    pub fn render(&self, labels: &[String]) -> String {
        render_terms(
            self.terms.iter().map(|(k, &c)| (c, monomial_factors(labels, k.iter().map(|&e| e as i64), "A"))),
        )
    }
}

/// The Laurent monomial `∏_{v∈U} X_v / ∏_{v∈T} X_v` for disjoint `U`, `T`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LaurentMonomialIndex {
    numerator: VertexMultiset,
    denominator: VertexMultiset,
}

impl LaurentMonomialIndex {
    pub fn new(numerator: VertexMultiset, denominator: VertexMultiset) -> Result<Self> {
        if !numerator.is_disjoint(&denominator) {
            return Err(Error::Precondition(
                "numerator and denominator of a Laurent monomial must be disjoint".into(),
            ));
        }
        Ok(LaurentMonomialIndex { numerator, denominator })
    }

    /// Splits an exponent vector into its positive and negative parts.
    pub fn from_exponents(exps: &[i32]) -> Self {
        let mut numerator = VertexMultiset::new();
        let mut denominator = VertexMultiset::new();
        for (i, &e) in exps.iter().enumerate() {
            match e {
                e if e > 0 => numerator.insert_many(Vertex::new(i), e as u32),
                e if e < 0 => denominator.insert_many(Vertex::new(i), e.unsigned_abs()),
                _ => {}
            }
        }
        LaurentMonomialIndex { numerator, denominator }
    }

    pub fn numerator(&self) -> &VertexMultiset {
        &self.numerator
    }

    pub fn denominator(&self) -> &VertexMultiset {
        &self.denominator
    }

    pub fn exponents(&self, nvars: usize) -> Vec<i32> {
        let mut e = vec![0i32; nvars];
        for (v, &k) in &self.numerator {
            e[v.index()] += k as i32;
        }
        for (v, &k) in &self.denominator {
            e[v.index()] -= k as i32;
        }
        e
    }
}

/// An element of `Z[A_v][X_v^{±1}]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    /// Sorted by key, no duplicate keys, no zero coefficients.
    terms: Vec<(Key, i64)>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        if c == 0 {
            return Self::zero(nvars);
        }
        LaurentPoly { nvars, terms: vec![(smallvec::smallvec![0; 2 * nvars], c)] }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// A single term `c · A^a · X^x`.
    pub fn monomial(nvars: usize, x: &[i32], a: &[u32], c: i64) -> Self {
        assert_eq!(x.len(), nvars, "X-exponent vector has the wrong length");
        assert_eq!(a.len(), nvars, "A-exponent vector has the wrong length");
        if c == 0 {
            return Self::zero(nvars);
        }
        let key: Key = x.iter().copied().chain(a.iter().map(|&e| e as i32)).collect();
        LaurentPoly { nvars, terms: vec![(key, c)] }
    }

    /// The variable `X_v`.
    pub fn x(nvars: usize, v: Vertex) -> Self {
        let mut x = vec![0; nvars];
        x[v.index()] = 1;
        Self::monomial(nvars, &x, &vec![0; nvars], 1)
    }

    /// The variable `A_v`.
    pub fn a(nvars: usize, v: Vertex) -> Self {
        let mut a = vec![0; nvars];
        a[v.index()] = 1;
        Self::monomial(nvars, &vec![0; nvars], &a, 1)
    }

    /// The Laurent monomial of `index` with coefficient 1.
    pub fn laurent_monomial(nvars: usize, index: &LaurentMonomialIndex) -> Self {
        Self::monomial(nvars, &index.exponents(nvars), &vec![0; nvars], 1)
    }

    pub fn from_coef(c: &CoefPoly) -> Self {
        let n = c.nvars;
        let terms = c
            .terms
            .iter()
            .map(|(k, &v)| {
                let key: Key = std::iter::repeat_n(0, n).chain(k.iter().map(|&e| e as i32)).collect();
                (key, v)
            })
            .collect();
        LaurentPoly { nvars: n, terms }
    }

    fn from_map(nvars: usize, map: HashMap<Key, i64>) -> Self {
        let mut terms: Vec<(Key, i64)> = map.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { nvars, terms }
    }

    /// Builds a polynomial from raw `(x ++ a, coefficient)` pairs, merging
    /// equal keys.
    pub(crate) fn from_raw_terms(nvars: usize, raw: impl IntoIterator<Item = (Key, i64)>) -> Result<Self> {
        let mut map: HashMap<Key, i64> = HashMap::new();
        for (k, c) in raw {
            debug_assert_eq!(k.len(), 2 * nvars);
            let slot = map.entry(k).or_insert(0);
            *slot = overflow(slot.checked_add(c))?;
        }
        Ok(Self::from_map(nvars, map))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored joint `(A, X)` monomials.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `(X-exponents, A-exponents, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &[i32], i64)> + '_ {
        self.terms
            .iter()
            .map(move |(k, c)| (&k[..self.nvars], &k[self.nvars..], *c))
    }

    /// Sum of all integer coefficients.
    pub fn coefficient_total(&self) -> Result<i64> {
        self.terms
            .iter()
            .try_fold(0i64, |acc, (_, c)| overflow(acc.checked_add(*c)))
    }

    pub fn is_coefficientwise_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c >= 0)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_universe(self.nvars, other.nvars)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ka, ca) = &self.terms[i];
            let (kb, cb) = &other.terms[j];
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    out.push((ka.clone(), *ca));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((kb.clone(), *cb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = overflow(ca.checked_add(*cb))?;
                    if c != 0 {
                        out.push((ka.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(LaurentPoly { nvars: self.nvars, terms: out })
    }

    pub fn try_neg(&self) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| Ok((k.clone(), overflow(c.checked_neg())?)))
            .collect::<Result<_>>()?;
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.try_neg()?)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_universe(self.nvars, other.nvars)?;
        let mut map: HashMap<Key, i64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let key = ka
                    .iter()
                    .zip(kb.iter())
                    .map(|(x, y)| overflow(x.checked_add(*y)))
                    .collect::<Result<Key>>()?;
                let c = overflow(ca.checked_mul(*cb))?;
                let slot = map.entry(key).or_insert(0);
                *slot = overflow(slot.checked_add(c))?;
            }
        }
        Ok(Self::from_map(self.nvars, map))
    }

    /// Multiplies by `c`, an element of the coefficient ring.
    pub fn try_scale(&self, c: &CoefPoly) -> Result<Self> {
        if let Some(k) = c.as_constant() {
            check_universe(self.nvars, c.nvars)?;
            if k == 1 {
                return Ok(self.clone());
            }
            let terms = self
                .terms
                .iter()
                .filter(|_| k != 0)
                .map(|(key, v)| Ok((key.clone(), overflow(v.checked_mul(k))?)))
                .collect::<Result<_>>()?;
            return Ok(LaurentPoly { nvars: self.nvars, terms });
        }
        self.try_mul(&Self::from_coef(c))
    }

    /// Multiplies by the Laurent monomial `X^shift`. This is the only kind of
    /// division the ring needs: dividing by `∏ X_v` is a negative shift.
    pub fn shift_x(&self, shift: &[i32]) -> Result<Self> {
        assert_eq!(shift.len(), self.nvars, "shift vector has the wrong length");
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut key = k.clone();
                for (e, s) in key.iter_mut().zip(shift) {
                    *e = overflow(e.checked_add(*s))?;
                }
                Ok((key, *c))
            })
            .collect::<Result<_>>()?;
        // A uniform shift preserves the lexicographic order.
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    /// Multiplies by `∏_{v ∈ m} X_v`.
    pub fn mul_x_multiset(&self, m: &VertexMultiset) -> Result<Self> {
        if m.is_empty() {
            return Ok(self.clone());
        }
        let mut shift = vec![0i32; self.nvars];
        for (v, &k) in m {
            shift[v.index()] = overflow(i32::try_from(k).ok())?;
        }
        self.shift_x(&shift)
    }

    /// The coefficient (in `Z[A]`) of the Laurent monomial `X^x`.
    pub fn coefficient_of_exponents(&self, x: &[i32]) -> CoefPoly {
        let n = self.nvars;
        let start = self.terms.partition_point(|(k, _)| &k[..n] < x);
        let terms = self.terms[start..]
            .iter()
            .take_while(|(k, _)| &k[..n] == x)
            .map(|(k, c)| (k[n..].iter().map(|&e| e as u32).collect(), *c))
            .collect();
        CoefPoly { nvars: n, terms }
    }

    pub fn coefficient_of(&self, index: &LaurentMonomialIndex) -> CoefPoly {
        self.coefficient_of_exponents(&index.exponents(self.nvars))
    }

    /// The grouped view: each distinct `X`-exponent vector with its
    /// coefficient polynomial, in canonical order.
    pub fn x_terms(&self) -> Vec<(Vec<i32>, CoefPoly)> {
        let n = self.nvars;
        let mut out: Vec<(Vec<i32>, CoefPoly)> = Vec::new();
        for (k, c) in &self.terms {
            let a: AKey = k[n..].iter().map(|&e| e as u32).collect();
            match out.last_mut() {
                Some((x, cp)) if x.as_slice() == &k[..n] => {
                    cp.terms.insert(a, *c);
                }
                _ => {
                    let mut cp = CoefPoly::zero(n);
                    cp.terms.insert(a, *c);
                    out.push((k[..n].to_vec(), cp));
                }
            }
        }
        out
    }

    /// Least common monomial denominator: `(numerator, d)` with
    /// `self = numerator / X^d` and `numerator` a genuine polynomial.
    pub fn split_denominator(&self) -> Result<(LaurentPoly, Vec<i32>)> {
        let n = self.nvars;
        let mut d = vec![0i32; n];
        for (k, _) in &self.terms {
            for (dv, &e) in d.iter_mut().zip(&k[..n]) {
                *dv = (*dv).max(-e);
            }
        }
        Ok((self.shift_x(&d)?, d))
    }

    /// Evaluates modulo the prime `p` at `X_v = x[v]`, `A_v = a[v]`.
    /// Every `x[v]` must be nonzero mod `p`.
    pub fn eval_mod(&self, x: &[u64], a: &[u64], p: u64) -> u64 {
        let n = self.nvars;
        let mulmod = |u: u64, v: u64| ((u as u128 * v as u128) % p as u128) as u64;
        let powmod = |mut b: u64, mut e: u64| {
            let mut r = 1u64;
            b %= p;
            while e > 0 {
                if e & 1 == 1 {
                    r = mulmod(r, b);
                }
                b = mulmod(b, b);
                e >>= 1;
            }
            r
        };
        let inv: Vec<u64> = x.iter().map(|&xv| powmod(xv, p - 2)).collect();
        let mut total = 0u64;
        for (k, c) in &self.terms {
            let mut t = (c.rem_euclid(p as i64)) as u64;
            for i in 0..n {
                let e = k[i];
                let base = if e >= 0 { x[i] } else { inv[i] };
                t = mulmod(t, powmod(base, e.unsigned_abs() as u64));
                t = mulmod(t, powmod(a[i], k[n + i] as u64));
            }
            total = (total + t) % p;
        }
        total
    }

    /// Canonical rendering: terms in canonical order, each as
    /// `c·A_a^e·…·X_v^e·…` with `^1` and unit coefficients omitted.
    pub fn render(&self, labels: &[String]) -> String {
        let n = self.nvars;
        render_terms(self.terms.iter().map(|(k, c)| {
            let mut factors = monomial_factors(labels, k[n..].iter().map(|&e| e as i64), "A");
            factors.extend(monomial_factors(labels, k[..n].iter().map(|&e| e as i64), "X"));
            (*c, factors)
        }))
    }

    /// `(numerator)/(denominator)` with a monomial denominator.
    pub fn render_fraction(&self, labels: &[String]) -> Result<String> {
        let (num, d) = self.split_denominator()?;
        let den = monomial_factors(labels, d.iter().map(|&e| e as i64), "X");
        if den.is_empty() {
            return Ok(num.render(labels));
        }
        Ok(format!("({})/({})", num.render(labels), den.join("·")))
    }
}

fn monomial_factors(labels: &[String], exps: impl Iterator<Item = i64>, var: &str) -> Vec<String> {
    exps.enumerate()
        .filter(|(_, e)| *e != 0)
        .map(|(i, e)| {
            if e == 1 {
                format!("{var}_{}", labels[i])
            } else {
                format!("{var}_{}^{e}", labels[i])
            }
        })
        .collect()
}

fn render_terms(terms: impl Iterator<Item = (i64, Vec<String>)>) -> String {
    let mut out = String::new();
    for (idx, (c, factors)) in terms.enumerate() {
        let magnitude = c.unsigned_abs();
        if idx == 0 {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        if factors.is_empty() {
            let _ = write!(out, "{magnitude}");
        } else {
            if magnitude != 1 {
                let _ = write!(out, "{magnitude}·");
            }
            out.push_str(&factors.join("·"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for &LaurentPoly {
            type Output = LaurentPoly;

            /// Panics on overflow or mismatched variable sets; use the
            /// `try_` method to handle those as errors.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait for LaurentPoly {
            type Output = LaurentPoly;

            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        self.try_neg().unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        -&self
    }
}
