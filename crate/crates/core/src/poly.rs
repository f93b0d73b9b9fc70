//! Monomials, term orders, polynomial rings and sparse polynomials over `GF(p)`.
//!
//! Monomials pack one exponent per byte into a `u128`, so at most 16 variables
//! with exponents below 128 are supported. Variable `i` lives in byte `i`.

use std::cmp::Ordering;
use std::fmt;

use crate::arith::PrimeField;
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 16;
const MAX_EXP: u32 = 127;
const HIGH: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;
const LOW7: u128 = 0x7f7f_7f7f_7f7f_7f7f_7f7f_7f7f_7f7f_7f7f;
const LANE16: u128 = 0x00ff_00ff_00ff_00ff_00ff_00ff_00ff_00ff;
const ONES16: u128 = 0x0001_0001_0001_0001_0001_0001_0001_0001;

#[inline]
fn byte_sum(x: u128) -> u32 {
    let y = (x & LANE16) + ((x >> 8) & LANE16);
    (y.wrapping_mul(ONES16) >> 112) as u32
}

#[inline]
fn low_mask(k: usize) -> u128 {
    if k >= 16 {
        u128::MAX
    } else {
        (1u128 << (8 * k)) - 1
    }
}

/// A power product `x_0^e_0 ... x_15^e_15` with cached total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    packed: u128,
    deg: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { packed: 0, deg: 0 };

    pub fn var(i: usize) -> Monomial {
        assert!(i < MAX_VARS);
        Monomial { packed: 1u128 << (8 * i), deg: 1 }
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut packed = 0u128;
        let mut deg = 0;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXP {
                return Err(Error::ExponentOverflow(e));
            }
            packed |= (e as u128) << (8 * i);
            deg += e;
        }
        Ok(Monomial { packed, deg })
    }

    #[inline]
    pub fn from_packed(packed: u128) -> Monomial {
        Monomial { packed, deg: byte_sum(packed) }
    }

    #[inline]
    pub fn packed(self) -> u128 {
        self.packed
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.packed >> (8 * i)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    #[inline]
    pub fn degree(self) -> u32 {
        self.deg
    }

    pub fn weighted_degree(self, weights: &[u32]) -> u32 {
        weights.iter().enumerate().map(|(i, w)| w * self.exponent(i)).sum()
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.packed == 0
    }

    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let p = self.packed + other.packed;
        if p & HIGH != 0 || (self.packed & HIGH) | (other.packed & HIGH) != 0 {
            return None;
        }
        // A byte carry would also set a high bit since both inputs are < 128.
        Some(Monomial { packed: p, deg: self.deg + other.deg })
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        let p = self.packed + other.packed;
        assert!(p & HIGH == 0, "exponent overflow in monomial product");
        Monomial { packed: p, deg: self.deg + other.deg }
    }

    /// True when `self` divides `other`.
    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        ((other.packed | HIGH) - self.packed) & HIGH == HIGH
    }

    /// `self / other`; `other` must divide `self`.
    #[inline]
    pub fn div(self, other: Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial { packed: self.packed - other.packed, deg: self.deg - other.deg }
    }

    #[inline]
    fn ge_mask(a: u128, b: u128) -> u128 {
        let m = ((a | HIGH) - b) & HIGH;
        (m >> 7) * 0xff
    }

    #[inline]
    pub fn lcm(self, other: Monomial) -> Monomial {
        let m = Self::ge_mask(self.packed, other.packed);
        Monomial::from_packed((self.packed & m) | (other.packed & !m))
    }

    #[inline]
    pub fn gcd(self, other: Monomial) -> Monomial {
        let m = Self::ge_mask(self.packed, other.packed);
        Monomial::from_packed((other.packed & m) | (self.packed & !m))
    }

    #[inline]
    fn support_mask(x: u128) -> u128 {
        (x + LOW7) & HIGH
    }

    #[inline]
    pub fn is_coprime(self, other: Monomial) -> bool {
        Self::support_mask(self.packed) & Self::support_mask(other.packed) == 0
    }

    /// Indices of variables with positive exponent.
    pub fn support(self) -> impl Iterator<Item = usize> {
        let p = self.packed;
        (0..MAX_VARS).filter(move |i| (p >> (8 * i)) & 0xff != 0)
    }

    /// Monomial with exponents of variable `i` removed.
    pub fn without_var(self, i: usize) -> Monomial {
        Monomial::from_packed(self.packed & !(0xffu128 << (8 * i)))
    }

    /// Reindex variables: variable `i` moves to `perm[i]`.
    pub fn permute(self, perm: &[usize]) -> Monomial {
        let mut packed = 0u128;
        for (i, &j) in perm.iter().enumerate() {
            packed |= ((self.packed >> (8 * i)) & 0xff) << (8 * j);
        }
        Monomial { packed, deg: self.deg }
    }
}

/// Monomial orders. `Block(k)` orders the first `k` variables by grevlex and
/// breaks ties by grevlex on the remaining ones, so it eliminates the block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermOrder {
    Grevlex,
    Lex,
    Block(usize),
}

impl TermOrder {
    #[inline]
    pub fn cmp(self, a: Monomial, b: Monomial) -> Ordering {
        match self {
            TermOrder::Grevlex => a.deg.cmp(&b.deg).then(b.packed.cmp(&a.packed)),
            TermOrder::Lex => a.packed.swap_bytes().cmp(&b.packed.swap_bytes()),
            TermOrder::Block(k) => {
                let m = low_mask(k);
                let (ab, bb) = (a.packed & m, b.packed & m);
                let (da, db) = (byte_sum(ab), byte_sum(bb));
                da.cmp(&db)
                    .then(bb.cmp(&ab))
                    .then_with(|| (a.deg - da).cmp(&(b.deg - db)))
                    .then(b.packed.cmp(&a.packed))
            }
        }
    }
}

/// A polynomial ring `GF(p)[x_0..x_{n-1}]` with a term order and a positive
/// grading (weights may be zero for auxiliary variables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: PrimeField,
    names: Vec<String>,
    order: TermOrder,
    weights: Vec<u32>,
}

impl PolyRing {
    pub fn new(field: PrimeField, names: Vec<String>) -> Result<PolyRing> {
        if names.len() > MAX_VARS {
            return Err(Error::TooManyVariables(names.len()));
        }
        let n = names.len();
        Ok(PolyRing { field, names, order: TermOrder::Grevlex, weights: vec![1; n] })
    }

    /// Ring with variables `x0, ..., x{n-1}`.
    pub fn standard(field: PrimeField, n: usize) -> Result<PolyRing> {
        Self::new(field, (0..n).map(|i| format!("x{i}")).collect())
    }

    pub fn with_order(&self, order: TermOrder) -> PolyRing {
        PolyRing { order, ..self.clone() }
    }

    pub fn with_weights(&self, weights: Vec<u32>) -> PolyRing {
        assert_eq!(weights.len(), self.nvars());
        PolyRing { weights, ..self.clone() }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn is_standard_graded(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    #[inline]
    pub fn cmp(&self, a: Monomial, b: Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    #[inline]
    pub fn weight(&self, m: Monomial) -> u32 {
        if self.is_standard_graded() {
            m.degree()
        } else {
            m.weighted_degree(&self.weights)
        }
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial { terms: vec![(Monomial::var(i), 1)] }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        let c = self.field.from_i64(c);
        Polynomial { terms: if c == 0 { vec![] } else { vec![(Monomial::ONE, c)] } }
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Parser::new(self, text, 1).parse_all()
    }

    /// Parse with error positions reported against `line`.
    pub fn parse_line(&self, text: &str, line: usize) -> Result<Polynomial> {
        Parser::new(self, text, line).parse_all()
    }

    pub fn fmt_monomial(&self, m: Monomial) -> String {
        let mut parts = Vec::new();
        for i in 0..self.nvars() {
            match m.exponent(i) {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                e => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn fmt_poly(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, &(m, c)) in f.terms.iter().enumerate() {
            let c = self.field.to_signed(c);
            let (neg, a) = if c < 0 { (true, -c) } else { (false, c) };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&a.to_string());
            } else if a == 1 {
                out.push_str(&self.fmt_monomial(m));
            } else {
                out.push_str(&format!("{}*{}", a, self.fmt_monomial(m)));
            }
        }
        out
    }

    /// Standard-graded copy with the same variables and field.
    pub fn standard_copy(&self) -> PolyRing {
        PolyRing {
            field: self.field,
            names: self.names.clone(),
            order: TermOrder::Grevlex,
            weights: vec![1; self.nvars()],
        }
    }
}

/// A sparse polynomial: nonzero terms sorted decreasingly by the ring's order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, u32)>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { terms: Vec::new() }
    }

    /// Build from arbitrary terms; sorts, combines and drops zeros.
    pub fn from_terms(ring: &PolyRing, mut terms: Vec<(Monomial, u32)>) -> Polynomial {
        terms.sort_by(|a, b| ring.cmp(b.0, a.0));
        let f = ring.field();
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(last.1, c),
                _ => out.push((m, c)),
            }
            if out.last().map(|t| t.1) == Some(0) {
                out.pop();
            }
        }
        Polynomial { terms: out }
    }

    /// Wrap terms that are already sorted and nonzero.
    pub fn from_sorted(terms: Vec<(Monomial, u32)>) -> Polynomial {
        Polynomial { terms }
    }

    pub fn monomial(m: Monomial, c: u32) -> Polynomial {
        Polynomial { terms: if c == 0 { vec![] } else { vec![(m, c)] } }
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Result<(Monomial, u32)> {
        self.terms.first().copied().ok_or(Error::ZeroPolynomial)
    }

    pub fn lm(&self) -> Monomial {
        self.terms[0].0
    }

    pub fn lc(&self) -> u32 {
        self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coeff(&self, m: Monomial) -> u32 {
        self.terms.iter().find(|t| t.0 == m).map_or(0, |t| t.1)
    }

    /// Degree in the ring's grading if homogeneous.
    pub fn homogeneous_degree(&self, ring: &PolyRing) -> Option<u32> {
        let mut it = self.terms.iter().map(|t| ring.weight(t.0));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_weight(&self, ring: &PolyRing) -> u32 {
        self.terms.iter().map(|t| ring.weight(t.0)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn resort(&self, ring: &PolyRing) -> Polynomial {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.cmp(b.0, a.0));
        Polynomial { terms }
    }

    pub fn neg(&self, ring: &PolyRing) -> Polynomial {
        let f = ring.field();
        Polynomial { terms: self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect() }
    }

    pub fn scale(&self, ring: &PolyRing, c: u32) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        let f = ring.field();
        Polynomial { terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect() }
    }

    pub fn mul_term(&self, ring: &PolyRing, m: Monomial, c: u32) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        let f = ring.field();
        Polynomial { terms: self.terms.iter().map(|&(t, a)| (t.mul(m), f.mul(a, c))).collect() }
    }

    pub fn make_monic(&self, ring: &PolyRing) -> Polynomial {
        match self.terms.first() {
            None => Polynomial::zero(),
            Some(&(_, c)) => self.scale(ring, ring.field().inv(c).expect("nonzero")),
        }
    }

    /// `self + c * m * other`, a single merge pass.
    pub fn add_scaled(&self, ring: &PolyRing, c: u32, m: Monomial, other: &Polynomial) -> Polynomial {
        let f = ring.field();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let bm = b[j].0.mul(m);
            match ring.cmp(a[i].0, bm) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bm, f.mul(c, b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.mul_add(a[i].1, c, b[j].1);
                    if s != 0 {
                        out.push((bm, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(t, x)| (t.mul(m), f.mul(c, x))));
        if c == 0 {
            out.retain(|t| t.1 != 0);
        }
        Polynomial { terms: out }
    }

    pub fn add(&self, ring: &PolyRing, other: &Polynomial) -> Polynomial {
        self.add_scaled(ring, 1, Monomial::ONE, other)
    }

    pub fn sub(&self, ring: &PolyRing, other: &Polynomial) -> Polynomial {
        self.add_scaled(ring, ring.field().neg(1), Monomial::ONE, other)
    }

    pub fn mul(&self, ring: &PolyRing, other: &Polynomial) -> Polynomial {
        let f = ring.field();
        let (small, big) =
            if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.is_empty() {
            return Polynomial::zero();
        }
        let mut prods = Vec::with_capacity(small.len() * big.len());
        for &(m, c) in &small.terms {
            for &(n, d) in &big.terms {
                prods.push((m.mul(n), f.mul(c, d)));
            }
        }
        Polynomial::from_terms(ring, prods)
    }

    pub fn pow(&self, ring: &PolyRing, e: u32) -> Polynomial {
        let mut acc = ring.constant(1);
        for _ in 0..e {
            acc = acc.mul(ring, self);
        }
        acc
    }

    /// Evaluate at a point with coordinates in the field.
    pub fn evaluate(&self, ring: &PolyRing, point: &[u32]) -> u32 {
        let f = ring.field();
        let mut acc = 0;
        for &(m, c) in &self.terms {
            let mut v = c;
            for i in m.support() {
                v = f.mul(v, f.pow(point[i], m.exponent(i) as u64));
            }
            acc = f.add(acc, v);
        }
        acc
    }

    /// Substitute `images[i]` (polynomials in `target`) for variable `i`.
    pub fn substitute(&self, source: &PolyRing, target: &PolyRing, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != source.nvars() {
            return Err(Error::DimensionMismatch { expected: source.nvars(), got: images.len() });
        }
        if source.field() != target.field() {
            return Err(Error::Hypothesis("substitution across different fields".into()));
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![target.constant(1)]; images.len()];
        let mut acc = Polynomial::zero();
        for &(m, c) in &self.terms {
            let mut t = Polynomial::monomial(Monomial::ONE, c);
            for i in m.support() {
                let e = m.exponent(i) as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(target, &images[i]);
                    powers[i].push(next);
                }
                t = t.mul(target, &powers[i][e]);
            }
            acc = acc.add(target, &t);
        }
        Ok(acc)
    }

    /// Rename variables: variable `i` of this polynomial becomes `perm[i]` in `target`.
    pub fn permute(&self, target: &PolyRing, perm: &[usize]) -> Polynomial {
        Polynomial::from_terms(target, self.terms.iter().map(|&(m, c)| (m.permute(perm), c)).collect())
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, ring: &PolyRing, d: &Polynomial) -> Option<Polynomial> {
        let f = ring.field();
        let (dm, dc) = d.leading_term().ok()?;
        let inv = f.inv(dc).ok()?;
        let mut rem = self.clone();
        let mut quo = Vec::new();
        while let Some(&(m, c)) = rem.terms.first() {
            if !dm.divides(m) {
                return None;
            }
            let q = (m.div(dm), f.mul(c, inv));
            quo.push(q);
            rem = rem.add_scaled(ring, f.neg(q.1), q.0, d);
        }
        Some(Polynomial { terms: quo })
    }

    /// Largest `e` with `x_i^e` dividing every term.
    pub fn var_content(&self, i: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(i)).min().unwrap_or(0)
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: Vec<char>,
    pos: usize,
    line: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a PolyRing, text: &str, line: usize) -> Self {
        Parser { ring, src: text.chars().collect(), pos: 0, line }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Polynomial> {
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let p = self.expr()?;
        if self.peek().is_some() {
            return self.err(format!("unexpected character '{}'", self.src[self.pos]));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let r = self.ring;
        let mut acc = Polynomial::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = if sign > 0 { acc.add(r, &t) } else { acc.sub(r, &t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(self.ring, &f);
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '(' || c == '_' => {
                    let f = self.factor()?;
                    acc = acc.mul(self.ring, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("expected exponent");
            }
            let s: String = self.src[start..self.pos].iter().collect();
            let e: u32 = match s.parse() {
                Ok(e) if e <= MAX_EXP => e,
                _ => {
                    self.pos = start;
                    return self.err(format!("exponent {s} out of range"));
                }
            };
            return Ok(base.pow(self.ring, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let r = self.ring;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = r.field().characteristic() as u64;
                let mut v = 0u64;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    v = (v * 10 + self.src[self.pos].to_digit(10).unwrap() as u64) % p;
                    self.pos += 1;
                }
                Ok(Polynomial::monomial(Monomial::ONE, v as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let ident: String = self.src[start..self.pos].iter().collect();
                let mut m = Monomial::ONE;
                let mut rest = ident.as_str();
                while !rest.is_empty() {
                    let best = r
                        .names()
                        .iter()
                        .enumerate()
                        .filter(|(_, n)| rest.starts_with(n.as_str()))
                        .max_by_key(|(_, n)| n.len());
                    match best {
                        Some((i, n)) => {
                            m = match m.checked_mul(Monomial::var(i)) {
                                Some(m) => m,
                                None => return self.err("exponent overflow"),
                            };
                            rest = &rest[n.len()..];
                        }
                        None => {
                            self.pos = start;
                            return self.err(format!("unknown variable in '{ident}'"));
                        }
                    }
                }
                Ok(Polynomial::monomial(m, 1))
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.support() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match self.exponent(i) {
                1 => write!(f, "x{i}")?,
                e => write!(f, "x{i}^{e}")?,
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(n: usize) -> PolyRing {
        PolyRing::standard(PrimeField::default(), n).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    // Straightforward grevlex on exponent vectors.
    fn grevlex_oracle(a: &[u32], b: &[u32]) -> Ordering {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    }

    #[test]
    fn grevlex_examples() {
        let o = TermOrder::Grevlex;
        // x0*x2 < x1^2 in grevlex
        assert_eq!(o.cmp(mono(&[1, 0, 1]), mono(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(mono(&[2, 0, 0]), mono(&[0, 1, 1])), Ordering::Greater);
        assert_eq!(o.cmp(mono(&[0, 0, 3]), mono(&[1, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates() {
        let o = TermOrder::Block(2);
        // anything involving the block beats anything without it
        assert_eq!(o.cmp(mono(&[1, 0, 0, 0]), mono(&[0, 0, 5, 5])), Ordering::Greater);
        assert_eq!(o.cmp(mono(&[1, 0, 2, 0]), mono(&[1, 0, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(mono(&[0, 1, 3, 0]), mono(&[1, 0, 0, 0])), Ordering::Less);
    }

    #[test]
    fn lcm_and_divides() {
        let a = mono(&[3, 0, 1]);
        let b = mono(&[1, 2, 4]);
        assert_eq!(a.lcm(b), mono(&[3, 2, 4]));
        assert_eq!(a.gcd(b), mono(&[1, 0, 1]));
        assert!(mono(&[1, 0, 1]).divides(a));
        assert!(!b.divides(a));
        assert!(mono(&[1, 0, 0]).is_coprime(mono(&[0, 3, 2])));
        assert!(!a.is_coprime(b));
    }

    #[test]
    fn leading_term_twisted_cubic_minor() {
        let r = ring(4);
        let f = r.parse("x0*x2 - x1^2").unwrap();
        assert_eq!(f.leading_term().unwrap(), (mono(&[0, 2, 0, 0]), r.field().neg(1)));
        assert_eq!(Polynomial::zero().leading_term(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn parse_and_print_round_trip() {
        let r = ring(3);
        let f = r.parse("3x0^2x1 - x2*x1 + 5 - 2(x0+x1)^2").unwrap();
        let g = r.parse(&r.fmt_poly(&f)).unwrap();
        assert_eq!(f, g);
        assert!(matches!(r.parse("x0 + y"), Err(Error::Parse { column: 6, .. })));
        assert!(r.parse("x0^").is_err());
    }

    #[test]
    fn substitution_homomorphism() {
        let r = ring(2);
        let t = PolyRing::new(PrimeField::default(), vec!["s".into(), "t".into()]).unwrap();
        let f = r.parse("x0^2 - 3*x0*x1").unwrap();
        let imgs = vec![t.parse("s^2").unwrap(), t.parse("s*t + t^2").unwrap()];
        let got = f.substitute(&r, &t, &imgs).unwrap();
        assert_eq!(got, t.parse("s^4 - 3*(s^2)*(s*t+t^2)").unwrap());
    }

    #[test]
    fn exact_division() {
        let r = ring(3);
        let a = r.parse("x0 + 2*x1").unwrap();
        let b = r.parse("x1*x2 - x0^2 + 7").unwrap();
        let p = a.mul(&r, &b);
        assert_eq!(p.div_exact(&r, &a), Some(b.clone()));
        assert_eq!(p.add(&r, &r.constant(1)).div_exact(&r, &a), None);
    }

    fn small_poly(n: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        prop::collection::vec((prop::collection::vec(0u32..4, n), -20i64..20), 0..6)
    }

    fn build(r: &PolyRing, t: &[(Vec<u32>, i64)]) -> Polynomial {
        Polynomial::from_terms(r, t.iter().map(|(e, c)| (mono(e), r.field().from_i64(*c))).collect())
    }

    proptest! {
        #[test]
        fn grevlex_matches_oracle(a in prop::collection::vec(0u32..6, 5), b in prop::collection::vec(0u32..6, 5)) {
            prop_assert_eq!(TermOrder::Grevlex.cmp(mono(&a), mono(&b)), grevlex_oracle(&a, &b));
            let lex = a.cmp(&b);
            prop_assert_eq!(TermOrder::Lex.cmp(mono(&a), mono(&b)), lex);
            let div = a.iter().zip(&b).all(|(x, y)| x <= y);
            prop_assert_eq!(mono(&a).divides(mono(&b)), div);
            let l: Vec<u32> = a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect();
            prop_assert_eq!(mono(&a).lcm(mono(&b)), mono(&l));
        }

        #[test]
        fn ring_axioms(a in small_poly(3), b in small_poly(3), c in small_poly(3)) {
            let r = ring(3);
            let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
            prop_assert_eq!(a.mul(&r, &b), b.mul(&r, &a));
            prop_assert_eq!(a.mul(&r, &b).mul(&r, &c), a.mul(&r, &b.mul(&r, &c)));
            prop_assert_eq!(a.mul(&r, &b.add(&r, &c)), a.mul(&r, &b).add(&r, &a.mul(&r, &c)));
            prop_assert_eq!(a.add(&r, &b).sub(&r, &b), a.clone());
            prop_assert!(a.sub(&r, &a).is_zero());
        }
    }
}
