//! Gröbner bases by Buchberger's algorithm with the Gebauer–Möller criteria
//! and the sugar selection strategy, plus the ideal operations built on them:
//! elimination, intersection, ideal quotients and saturation.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::PrimeField;
use crate::error::{Error, Result};
use crate::heap::Heap;
use crate::poly::{Monomial, PolyRing, Polynomial, TermOrder};

/// A term `coeff * mon * e_comp` of a free-module element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct VTerm {
    pub mon: Monomial,
    pub comp: u32,
    pub coeff: u32,
}

pub(crate) type Vector = Vec<VTerm>;

/// Module order: position-over-term or term-over-position, with smaller
/// component indices ranking higher.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ModOrder {
    pub mon: TermOrder,
    pub pot: bool,
}

impl ModOrder {
    #[inline]
    pub fn cmp(&self, a: Monomial, ac: u32, b: Monomial, bc: u32) -> Ordering {
        if self.pot {
            bc.cmp(&ac).then_with(|| self.mon.cmp(a, b))
        } else {
            self.mon.cmp(a, b).then(bc.cmp(&ac))
        }
    }

    pub fn sort(&self, v: &mut Vector) {
        v.sort_by(|a, b| self.cmp(b.mon, b.comp, a.mon, a.comp));
    }
}

const EXTRA: usize = usize::MAX;

#[derive(Clone, Copy)]
struct Stream {
    src: usize,
    pos: usize,
    mult: Monomial,
    coef: u32,
}

struct Meta {
    lead: Monomial,
    comp: u32,
    sugar: u32,
    active: bool,
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
    alive: bool,
}

/// Buchberger engine over free modules `S^m` with given twists.
pub(crate) struct Engine<'a> {
    pub field: PrimeField,
    pub order: ModOrder,
    pub weights: &'a [u32],
    pub twists: &'a [u32],
}

impl<'a> Engine<'a> {
    #[inline]
    fn weight(&self, m: Monomial) -> u32 {
        m.weighted_degree(self.weights)
    }

    fn sugar_of(&self, v: &[VTerm]) -> u32 {
        v.iter().map(|t| self.weight(t.mon) + self.twists[t.comp as usize]).max().unwrap_or(0)
    }

    fn make_monic(&self, v: &mut Vector) {
        if let Some(t) = v.first() {
            let inv = self.field.inv(t.coeff).expect("nonzero lead");
            if inv != 1 {
                for t in v.iter_mut() {
                    t.coeff = self.field.mul(t.coeff, inv);
                }
            }
        }
    }

    /// Fully reduce the sum of `init` streams by the monic vectors indexed in `leads`.
    fn reduce(
        &self,
        polys: &[Vector],
        extra: &[VTerm],
        init: &[Stream],
        leads: &[(Monomial, u32, usize)],
    ) -> Vector {
        fn src<'b>(polys: &'b [Vector], extra: &'b [VTerm], s: usize) -> &'b [VTerm] {
            if s == EXTRA {
                extra
            } else {
                &polys[s]
            }
        }
        let f = self.field;
        let order = self.order;
        let cmp = |a: &(Monomial, u32, usize), b: &(Monomial, u32, usize)| order.cmp(a.0, a.1, b.0, b.1);
        let mut streams: Vec<Stream> = init.to_vec();
        let mut heap: Heap<(Monomial, u32, usize)> = Heap::new();
        for (k, s) in streams.iter().enumerate() {
            let v = src(polys, extra, s.src);
            if s.pos < v.len() {
                heap.push((v[s.pos].mon.mul(s.mult), v[s.pos].comp, k), &cmp);
            }
        }
        let mut out = Vec::new();
        while let Some(&(m, c, _)) = heap.peek() {
            let mut sum = 0u32;
            while let Some(&(m2, c2, k)) = heap.peek() {
                if m2 != m || c2 != c {
                    break;
                }
                heap.pop(&cmp);
                let s = &mut streams[k];
                let v = src(polys, extra, s.src);
                sum = f.mul_add(sum, s.coef, v[s.pos].coeff);
                s.pos += 1;
                if s.pos < v.len() {
                    heap.push((v[s.pos].mon.mul(s.mult), v[s.pos].comp, k), &cmp);
                }
            }
            if sum == 0 {
                continue;
            }
            let red = leads.iter().find(|&&(lm, lc, _)| lc == c && lm.divides(m));
            match red {
                Some(&(lm, _, r)) => {
                    if polys[r].len() > 1 {
                        let s = Stream { src: r, pos: 1, mult: m.div(lm), coef: f.neg(sum) };
                        let t = polys[r][1];
                        streams.push(s);
                        heap.push((t.mon.mul(s.mult), t.comp, streams.len() - 1), &cmp);
                    }
                }
                None => out.push(VTerm { mon: m, comp: c, coeff: sum }),
            }
        }
        out
    }

    /// Normal form of `v` modulo monic vectors `basis` (any generating set).
    pub fn normal_form(&self, basis: &[Vector], v: &[VTerm]) -> Vector {
        let leads: Vec<_> = basis.iter().enumerate().map(|(i, b)| (b[0].mon, b[0].comp, i)).collect();
        let init = [Stream { src: EXTRA, pos: 0, mult: Monomial::ONE, coef: 1 }];
        self.reduce(basis, v, &init, &leads)
    }

    /// Reduced Gröbner basis of the submodule generated by `gens`, monic and
    /// sorted by increasing leading term.
    pub fn groebner(&self, gens: Vec<Vector>) -> Vec<Vector> {
        let f = self.field;
        let ideal_case = self.twists.len() == 1;
        let mut polys: Vec<Vector> = Vec::new();
        let mut meta: Vec<Meta> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let pair_cmp = |pairs: &Vec<Pair>, a: usize, b: usize| -> Ordering {
            let (p, q) = (&pairs[a], &pairs[b]);
            // min-heap on (sugar, lcm)
            q.sugar.cmp(&p.sugar).then_with(|| self.order.mon.cmp(q.lcm, p.lcm))
        };
        let mut queue: Heap<usize> = Heap::new();
        let mut pending: Vec<(u32, Vector)> = gens
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|g| (self.sugar_of(&g), g))
            .collect();
        pending.sort_by(|a, b| b.0.cmp(&a.0));
        let mut leads: Vec<(Monomial, u32, usize)> = Vec::new();

        loop {
            while let Some(&top) = queue.peek() {
                if pairs[top].alive {
                    break;
                }
                queue.pop(&|a: &usize, b: &usize| pair_cmp(&pairs, *a, *b));
            }
            let pair_sugar = queue.peek().map(|&p| pairs[p].sugar);
            let gen_sugar = pending.last().map(|g| g.0);
            let (h, sugar) = match (gen_sugar, pair_sugar) {
                (None, None) => break,
                (Some(gs), ps) if ps.map_or(true, |ps| gs <= ps) => {
                    let (s, g) = pending.pop().unwrap();
                    let init = [Stream { src: EXTRA, pos: 0, mult: Monomial::ONE, coef: 1 }];
                    (self.reduce(&polys, &g, &init, &leads), s)
                }
                _ => {
                    let p = queue.pop(&|a: &usize, b: &usize| pair_cmp(&pairs, *a, *b)).unwrap();
                    let pr = pairs[p];
                    pairs[p].alive = false;
                    let init = [
                        Stream { src: pr.i, pos: 1, mult: pr.lcm.div(meta[pr.i].lead), coef: 1 },
                        Stream { src: pr.j, pos: 1, mult: pr.lcm.div(meta[pr.j].lead), coef: f.neg(1) },
                    ];
                    (self.reduce(&polys, &[], &init, &leads), pr.sugar)
                }
            };
            if h.is_empty() {
                continue;
            }
            let mut h = h;
            self.make_monic(&mut h);
            let hl = h[0].mon;
            let hc = h[0].comp;
            let hi = polys.len();

            // Gebauer–Möller update.
            let mut cand: Vec<(usize, Monomial, bool)> = meta
                .iter()
                .enumerate()
                .filter(|(_, m)| m.active && m.comp == hc)
                .map(|(g, m)| (g, m.lead.lcm(hl), ideal_case && m.lead.is_coprime(hl)))
                .collect();
            let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
            for idx in 0..cand.len() {
                let (_, l1, cop) = cand[idx];
                let dominated = cand[idx + 1..].iter().any(|c| c.1.divides(l1))
                    || kept.iter().any(|c| c.1.divides(l1));
                if cop || !dominated {
                    kept.push(cand[idx]);
                }
            }
            cand.clear();
            for p in pairs.iter_mut().filter(|p| p.alive) {
                if meta[p.i].comp != hc || !hl.divides(p.lcm) {
                    continue;
                }
                if meta[p.i].lead.lcm(hl) != p.lcm && meta[p.j].lead.lcm(hl) != p.lcm {
                    p.alive = false;
                }
            }
            for &(g, l, cop) in &kept {
                if cop {
                    continue;
                }
                let s = (sugar + self.weight(l.div(hl))).max(meta[g].sugar + self.weight(l.div(meta[g].lead)));
                pairs.push(Pair { i: g, j: hi, lcm: l, sugar: s, alive: true });
                let idx = pairs.len() - 1;
                queue.push(idx, &|a: &usize, b: &usize| pair_cmp(&pairs, *a, *b));
            }
            for m in meta.iter_mut() {
                if m.active && m.comp == hc && hl.divides(m.lead) {
                    m.active = false;
                }
            }
            polys.push(h);
            meta.push(Meta { lead: hl, comp: hc, sugar, active: true });
            leads = meta
                .iter()
                .enumerate()
                .filter(|(_, m)| m.active)
                .map(|(i, m)| (m.lead, m.comp, i))
                .collect();
        }

        // Interreduce tails.
        let mut out: Vec<Vector> = Vec::new();
        for &(_, _, i) in &leads {
            let init = [Stream { src: EXTRA, pos: 1, mult: Monomial::ONE, coef: 1 }];
            let tail = self.reduce(&polys, &polys[i], &init, &leads);
            let mut v = vec![polys[i][0]];
            v.extend(tail);
            out.push(v);
        }
        out.sort_by(|a, b| self.order.cmp(a[0].mon, a[0].comp, b[0].mon, b[0].comp));
        out
    }
}

pub(crate) fn poly_to_vector(p: &Polynomial) -> Vector {
    p.terms().iter().map(|&(mon, coeff)| VTerm { mon, comp: 0, coeff }).collect()
}

pub(crate) fn vector_to_poly(v: &[VTerm]) -> Polynomial {
    Polynomial::from_sorted(v.iter().map(|t| (t.mon, t.coeff)).collect())
}

/// A reduced Gröbner basis together with the ring (and order) it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: PolyRing,
    elements: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn order(&self) -> TermOrder {
        self.ring.order()
    }

    /// Monic elements sorted by increasing leading monomial.
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|e| e.lm()).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elements.iter().any(|e| e.lm().is_one())
    }

    fn engine(&self) -> (Vec<u32>, [u32; 1]) {
        (self.ring.weights().to_vec(), [0])
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let (w, tw) = self.engine();
        let e = Engine {
            field: self.ring.field(),
            order: ModOrder { mon: self.ring.order(), pot: true },
            weights: &w,
            twists: &tw,
        };
        let basis: Vec<Vector> = self.elements.iter().map(poly_to_vector).collect();
        vector_to_poly(&e.normal_form(&basis, &poly_to_vector(&f.resort(&self.ring))))
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }
}

/// Reduced Gröbner basis of `gens` in the order of `ring`. Inputs need not be
/// homogeneous.
pub fn buchberger(ring: &PolyRing, gens: &[Polynomial]) -> GroebnerBasis {
    let tw = [0u32];
    let e = Engine {
        field: ring.field(),
        order: ModOrder { mon: ring.order(), pot: true },
        weights: ring.weights(),
        twists: &tw,
    };
    let vs: Vec<Vector> = gens.iter().map(|g| poly_to_vector(&g.resort(ring))).collect();
    let elements = e.groebner(vs).iter().map(|v| vector_to_poly(v)).collect();
    GroebnerBasis { ring: ring.clone(), elements }
}

/// A homogeneous ideal with generators and lazily computed Gröbner bases,
/// one per term order. Homogeneity is with respect to the ring's grading.
#[derive(Debug)]
pub struct GradedIdeal {
    ring: PolyRing,
    gens: Vec<Polynomial>,
    cache: Mutex<HashMap<TermOrder, Arc<GroebnerBasis>>>,
}

impl Clone for GradedIdeal {
    fn clone(&self) -> Self {
        GradedIdeal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl GradedIdeal {
    pub fn new(ring: PolyRing, gens: Vec<Polynomial>) -> Result<GradedIdeal> {
        let ring = ring.with_order(TermOrder::Grevlex);
        let mut out = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            if g.homogeneous_degree(&ring).is_none() {
                return Err(Error::NotHomogeneous(ring.fmt_poly(&g)));
            }
            out.push(g.resort(&ring));
        }
        Ok(GradedIdeal { ring, gens: out, cache: Mutex::new(HashMap::new()) })
    }

    /// Parse generators, one per entry.
    pub fn parse(ring: PolyRing, gens: &[&str]) -> Result<GradedIdeal> {
        let ps = gens.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>>>()?;
        GradedIdeal::new(ring, ps)
    }

    fn with_gb(ring: PolyRing, gb: GroebnerBasis) -> GradedIdeal {
        let gens = gb.elements.clone();
        let mut map = HashMap::new();
        map.insert(TermOrder::Grevlex, Arc::new(gb));
        GradedIdeal { ring, gens, cache: Mutex::new(map) }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn groebner_basis(&self, order: TermOrder) -> Arc<GroebnerBasis> {
        if let Some(gb) = self.cache.lock().unwrap().get(&order) {
            return gb.clone();
        }
        let gb = Arc::new(buchberger(&self.ring.with_order(order), &self.gens));
        self.cache.lock().unwrap().entry(order).or_insert(gb).clone()
    }

    /// Grevlex Gröbner basis.
    pub fn gb(&self) -> Arc<GroebnerBasis> {
        self.groebner_basis(TermOrder::Grevlex)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.gb().contains(f)
    }

    pub fn contains_ideal(&self, other: &GradedIdeal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_ideal(&self, other: &GradedIdeal) -> bool {
        self.ring.nvars() == other.ring.nvars() && self.gb().elements == other.gb().elements
    }

    pub fn is_unit(&self) -> bool {
        self.gb().is_unit_ideal()
    }

    /// `I + (extra)`
    pub fn add_gens(&self, extra: &[Polynomial]) -> Result<GradedIdeal> {
        let mut g = self.gens.clone();
        g.extend(extra.iter().cloned());
        GradedIdeal::new(self.ring.clone(), g)
    }

    pub fn sum(&self, other: &GradedIdeal) -> Result<GradedIdeal> {
        self.add_gens(&other.gens)
    }

    /// Generators of the minimal degree appearing, i.e. the least degree `j`
    /// with `I_j != 0`, or `None` for the zero ideal.
    pub fn initial_degree(&self) -> Option<u32> {
        self.gens.iter().map(|g| g.max_weight(&self.ring)).min()
    }

    /// Same ideal in a ring with the standard grading.
    pub fn standard_graded(&self) -> Result<GradedIdeal> {
        GradedIdeal::new(self.ring.standard_copy(), self.gens.clone())
    }

    /// The same ideal with a minimal generating set, chosen greedily in
    /// increasing degree from the reduced Gröbner basis.
    pub fn minimalized(&self) -> GradedIdeal {
        let mut cands = self.gb().elements.clone();
        cands.sort_by_key(|g| g.max_weight(&self.ring));
        let mut kept: Vec<Polynomial> = Vec::new();
        let mut span = buchberger(&self.ring, &kept);
        for c in cands {
            if !span.contains(&c) {
                kept.push(c);
                span = buchberger(&self.ring, &kept);
            }
        }
        GradedIdeal { ring: self.ring.clone(), gens: kept, cache: Mutex::new(self.cache.lock().unwrap().clone()) }
    }

    /// Apply the ring automorphism sending variable `i` to `images[i]`.
    pub fn map(&self, images: &[Polynomial]) -> Result<GradedIdeal> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.substitute(&self.ring, &self.ring, images))
            .collect::<Result<Vec<_>>>()?;
        GradedIdeal::new(self.ring.clone(), gens)
    }
}

/// `I ∩ K[remaining variables]`, returned in the ring of the remaining
/// variables (same names and weights).
pub fn eliminate(ideal: &GradedIdeal, block: &[usize]) -> Result<GradedIdeal> {
    eliminate_polys(ideal.ring(), ideal.gens(), block)
}

/// Elimination for generators that need only be homogeneous after the
/// block variables are removed.
pub fn eliminate_polys(ring: &PolyRing, gens: &[Polynomial], block: &[usize]) -> Result<GradedIdeal> {
    let n = ring.nvars();
    let mut in_block = vec![false; n];
    for &b in block {
        if b >= n {
            return Err(Error::DimensionMismatch { expected: n, got: b + 1 });
        }
        in_block[b] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| !in_block[i]).collect();
    let k = n - rest.len();
    let mut perm = vec![0usize; n];
    let mut names = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut next = 0;
    for i in (0..n).filter(|&i| in_block[i]).chain(rest.iter().copied()) {
        perm[i] = next;
        names.push(ring.names()[i].clone());
        weights.push(ring.weights()[i]);
        next += 1;
    }
    let big = PolyRing::new(ring.field(), names.clone())?.with_weights(weights.clone()).with_order(TermOrder::Block(k));
    let pg: Vec<Polynomial> = gens.iter().map(|g| g.permute(&big, &perm)).collect();
    let gb = buchberger(&big, &pg);
    let small = PolyRing::new(ring.field(), names[k..].to_vec())?.with_weights(weights[k..].to_vec());
    let mask: u128 = if k == 0 { 0 } else { (1u128 << (8 * k)) - 1 };
    let mut elems = Vec::new();
    for e in gb.elements() {
        if e.terms().iter().any(|t| t.0.packed() & mask != 0) {
            continue;
        }
        let terms = e.terms().iter().map(|&(m, c)| (Monomial::from_packed(m.packed() >> (8 * k)), c)).collect();
        elems.push(Polynomial::from_sorted(terms));
    }
    for e in &elems {
        if e.homogeneous_degree(&small).is_none() {
            return Err(Error::NotHomogeneous(small.fmt_poly(e)));
        }
    }
    elems.sort_by(|a, b| small.cmp(a.lm(), b.lm()));
    Ok(GradedIdeal::with_gb(small.clone(), GroebnerBasis { ring: small, elements: elems }))
}

/// `I ∩ J`, by eliminating `t` from `t I + (1 - t) J`.
pub fn intersect(i: &GradedIdeal, j: &GradedIdeal) -> Result<GradedIdeal> {
    let ring = i.ring();
    if ring.nvars() != j.ring().nvars() {
        return Err(Error::DimensionMismatch { expected: ring.nvars(), got: j.ring().nvars() });
    }
    let n = ring.nvars();
    let mut names = vec!["_t".to_string()];
    names.extend(ring.names().iter().cloned());
    let mut weights = vec![0];
    weights.extend(ring.weights().iter().copied());
    let big = PolyRing::new(ring.field(), names)?.with_weights(weights);
    let shift: Vec<usize> = (1..=n).collect();
    let t = big.var(0);
    let one_minus_t = big.constant(1).sub(&big, &t);
    let mut gens = Vec::new();
    for g in i.gens() {
        gens.push(g.permute(&big, &shift).mul(&big, &t));
    }
    for g in j.gens() {
        gens.push(g.permute(&big, &shift).mul(&big, &one_minus_t));
    }
    let out = eliminate_polys(&big, &gens, &[0])?;
    let elems = out.gb().elements().to_vec();
    Ok(GradedIdeal::with_gb(ring.clone(), GroebnerBasis { ring: ring.clone(), elements: elems }))
}

/// `(I : f)`
pub fn colon(i: &GradedIdeal, f: &Polynomial) -> Result<GradedIdeal> {
    let ring = i.ring();
    if f.is_zero() {
        return GradedIdeal::new(ring.clone(), vec![ring.constant(1)]);
    }
    let fi = GradedIdeal::new(ring.clone(), vec![f.clone()])?;
    let both = intersect(i, &fi)?;
    let gens = both
        .gens()
        .iter()
        .map(|g| g.div_exact(ring, &f.resort(ring)).expect("generator of I ∩ (f) divisible by f"))
        .collect();
    GradedIdeal::new(ring.clone(), gens)
}

/// `(I : J)` as the intersection of `(I : g)` over generators `g` of `J`.
pub fn colon_ideal(i: &GradedIdeal, j: &GradedIdeal) -> Result<GradedIdeal> {
    let mut acc: Option<GradedIdeal> = None;
    for g in j.gens() {
        let q = colon(i, g)?;
        acc = Some(match acc {
            None => q,
            Some(a) => intersect(&a, &q)?,
        });
    }
    Ok(acc.unwrap_or_else(|| GradedIdeal::new(i.ring().clone(), vec![i.ring().constant(1)]).unwrap()))
}

fn is_irrelevant(j: &GradedIdeal) -> bool {
    let r = j.ring();
    (0..r.nvars()).all(|k| j.contains(&r.var(k)))
}

/// `(I : J^∞)`. Uses a generic linear form when `J` is the irrelevant ideal.
pub fn saturate(i: &GradedIdeal, j: &GradedIdeal) -> Result<GradedIdeal> {
    if i.ring().is_standard_graded() && is_irrelevant(j) {
        return saturate_irrelevant(i, 0);
    }
    iterated_colon(i, j)
}

fn iterated_colon(i: &GradedIdeal, j: &GradedIdeal) -> Result<GradedIdeal> {
    let mut cur = i.clone();
    loop {
        let next = colon_ideal(&cur, j)?;
        if next.same_ideal(&cur) {
            return Ok(cur);
        }
        cur = next;
    }
}

/// `(I : x_last^∞)` from a grevlex basis: divide each element by the largest
/// power of the last variable.
fn saturate_last_var(i: &GradedIdeal) -> Result<GradedIdeal> {
    let ring = i.ring();
    let last = ring.nvars() - 1;
    let gens = i
        .gb()
        .elements()
        .iter()
        .map(|g| {
            let e = g.var_content(last);
            let terms = g
                .terms()
                .iter()
                .map(|&(m, c)| {
                    let mut ex = m.exponents(ring.nvars());
                    ex[last] -= e;
                    (Monomial::from_exponents(&ex).unwrap(), c)
                })
                .collect();
            Polynomial::from_sorted(terms)
        })
        .collect();
    GradedIdeal::new(ring.clone(), gens)
}

/// `(I : x_var^∞)`, via a grevlex basis with `x_var` moved last.
pub fn saturate_by_variable(i: &GradedIdeal, var: usize) -> Result<GradedIdeal> {
    let ring = i.ring();
    let n = ring.nvars();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(var, n - 1);
    let moved: Vec<Polynomial> = i.gens().iter().map(|g| g.permute(ring, &perm)).collect();
    let sat = saturate_last_var(&GradedIdeal::new(ring.clone(), moved)?)?;
    let back = sat.gens().iter().map(|g| g.permute(ring, &perm)).collect();
    GradedIdeal::new(ring.clone(), back)
}

/// Saturation with respect to the irrelevant ideal.
///
/// A linear form `h` that is a nonzerodivisor on the saturation gives
/// `I^sat = (I : h^∞)`, and the result certifies itself by having the same
/// Hilbert polynomial as `I`. The last variable is tried first, then seeded
/// random forms; the iterated quotient is the fallback.
pub fn saturate_irrelevant(i: &GradedIdeal, seed: u64) -> Result<GradedIdeal> {
    let ring = i.ring();
    let n = ring.nvars();
    if n == 0 || i.gens().is_empty() {
        return Ok(i.clone());
    }
    let target = crate::hilbert::hilbert_series(i)?.hilbert_polynomial();
    let check = |c: &GradedIdeal| -> Result<bool> {
        Ok(crate::hilbert::hilbert_series(c)?.hilbert_polynomial() == target)
    };
    let cand = saturate_last_var(i)?;
    if check(&cand)? {
        return Ok(cand);
    }
    let f = ring.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..6 {
        let coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(1..f.characteristic())).collect();
        // forward map sends x_last to h; inverse sends x_last to (x_last - sum c_i x_i) / c_last
        let mut fwd: Vec<Polynomial> = (0..n).map(|k| ring.var(k)).collect();
        let mut h = Polynomial::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            h = h.add(ring, &ring.var(k).scale(ring, c));
        }
        fwd[n - 1] = h;
        let inv_c = f.inv(coeffs[n - 1])?;
        let mut back = ring.var(n - 1);
        for (k, &c) in coeffs.iter().enumerate().take(n - 1) {
            back = back.sub(ring, &ring.var(k).scale(ring, c));
        }
        let mut bwd: Vec<Polynomial> = (0..n).map(|k| ring.var(k)).collect();
        bwd[n - 1] = back.scale(ring, inv_c);
        let moved = i.map(&bwd)?;
        let sat = saturate_last_var(&moved)?.map(&fwd)?;
        if check(&sat)? {
            return Ok(sat);
        }
    }
    iterated_colon(i, &GradedIdeal::new(ring.clone(), (0..n).map(|k| ring.var(k)).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(n: usize) -> PolyRing {
        PolyRing::standard(PrimeField::default(), n).unwrap()
    }

    fn spoly(r: &PolyRing, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let l = f.lm().lcm(g.lm());
        let a = f.mul_term(r, l.div(f.lm()), r.field().inv(f.lc()).unwrap());
        let b = g.mul_term(r, l.div(g.lm()), r.field().inv(g.lc()).unwrap());
        a.sub(r, &b)
    }

    // Naive remainder by repeated top reduction, independent of the engine.
    fn naive_nf(r: &PolyRing, f: &Polynomial, g: &[Polynomial]) -> Polynomial {
        let fld = r.field();
        let mut rem = Polynomial::zero();
        let mut p = f.clone();
        while !p.is_zero() {
            let (m, c) = p.leading_term().unwrap();
            match g.iter().find(|q| q.lm().divides(m)) {
                Some(q) => {
                    let k = fld.mul(c, fld.inv(q.lc()).unwrap());
                    p = p.add_scaled(r, fld.neg(k), m.div(q.lm()), q);
                }
                None => {
                    rem = rem.add(r, &Polynomial::monomial(m, c));
                    p = p.sub(r, &Polynomial::monomial(m, c));
                }
            }
        }
        rem
    }

    fn twisted_cubic() -> GradedIdeal {
        GradedIdeal::parse(ring(4), &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap()
    }

    #[test]
    fn twisted_cubic_basis_is_the_minors() {
        let i = twisted_cubic();
        let gb = i.gb();
        let lms: Vec<String> = gb.leading_monomials().iter().map(|m| i.ring().fmt_monomial(*m)).collect();
        assert_eq!(lms, ["x2^2", "x1*x2", "x1^2"]);
        for g in i.gens() {
            assert!(gb.contains(g));
        }
        assert!(!gb.contains(&i.ring().parse("x0*x1 - x2^2").unwrap()));
    }

    #[test]
    fn minimal_generators() {
        let i = twisted_cubic();
        let extra = i.add_gens(&[i.ring().parse("x0*x2 - x1^2 + x0*x3 - x1*x2").unwrap(), i.ring().parse("x0^2*x2 - x0*x1^2").unwrap()]).unwrap();
        let m = extra.minimalized();
        assert_eq!(m.gens().len(), 3);
        assert!(m.same_ideal(&i));
        let mixed = GradedIdeal::parse(ring(3), &["x0^2", "x0^3 + x1^3", "x0*x1^2"]).unwrap().minimalized();
        let degs: Vec<u32> = mixed.gens().iter().map(|g| g.total_degree()).collect();
        assert_eq!(degs, [2, 3, 3]);
    }

    #[test]
    fn unit_ideal_and_empty_input() {
        let r = ring(2);
        let gb = buchberger(&r, &[r.parse("x0 + 1").unwrap(), r.parse("x0").unwrap()]);
        assert_eq!(gb.elements(), &[r.constant(1)]);
        assert!(buchberger(&r, &[]).elements().is_empty());
    }

    #[test]
    fn eliminate_parametrized_cubic() {
        let f = PrimeField::default();
        let names = ["s", "t", "x0", "x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        let r = PolyRing::new(f, names).unwrap().with_weights(vec![1, 1, 3, 3, 3, 3]);
        let gens = ["x0 - s^3", "x1 - s^2*t", "x2 - s*t^2", "x3 - t^3"];
        let i = GradedIdeal::parse(r, &gens).unwrap();
        let e = eliminate(&i, &[0, 1]).unwrap();
        let cubic = GradedIdeal::parse(e.ring().standard_copy(), &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
        let e = e.standard_graded().unwrap();
        assert!(e.same_ideal(&cubic));
        // empty block is the identity
        let same = eliminate(&cubic, &[]).unwrap();
        assert!(same.same_ideal(&cubic));
    }

    #[test]
    fn intersection_and_colon() {
        let r = ring(3);
        let i = GradedIdeal::parse(r.clone(), &["x0", "x1"]).unwrap();
        let j = GradedIdeal::parse(r.clone(), &["x0", "x2"]).unwrap();
        let k = intersect(&i, &j).unwrap();
        let expect = GradedIdeal::parse(r.clone(), &["x0", "x1*x2"]).unwrap();
        assert!(k.same_ideal(&expect));
        let c = colon(&expect, &r.parse("x2").unwrap()).unwrap();
        assert!(c.same_ideal(&i));
    }

    #[test]
    fn saturation_of_irrelevant_component() {
        let r = ring(3);
        // (x0^2, x0*x1, x0*x2) = (x0) ∩ (x0^2, x1, x2)
        let i = GradedIdeal::parse(r.clone(), &["x0^2", "x0*x1", "x0*x2"]).unwrap();
        let s = saturate_irrelevant(&i, 1).unwrap();
        assert!(s.same_ideal(&GradedIdeal::parse(r.clone(), &["x0"]).unwrap()));
        let m = GradedIdeal::parse(r.clone(), &["x0", "x1", "x2"]).unwrap();
        let s2 = iterated_colon(&i, &m).unwrap();
        assert!(s2.same_ideal(&s));
        // a saturated ideal is unchanged
        let tc = twisted_cubic();
        assert!(saturate_irrelevant(&tc, 3).unwrap().same_ideal(&tc));
    }

    fn small_poly(n: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
        prop::collection::vec((prop::collection::vec(0u32..3, n), -9i64..9), 1..5)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn spolys_reduce_to_zero(gs in prop::collection::vec(small_poly(3), 1..4)) {
            let r = ring(3);
            let polys: Vec<Polynomial> = gs.iter().map(|t| Polynomial::from_terms(&r, t.iter().map(|(e, c)| (Monomial::from_exponents(e).unwrap(), r.field().from_i64(*c))).collect())).collect();
            let gb = buchberger(&r, &polys);
            let el = gb.elements();
            for a in 0..el.len() {
                for b in a + 1..el.len() {
                    prop_assert!(naive_nf(&r, &spoly(&r, &el[a], &el[b]), el).is_zero());
                }
            }
            for p in &polys {
                prop_assert!(naive_nf(&r, p, el).is_zero());
            }
            // reduced: no term of an element divisible by another lead
            for (a, e) in el.iter().enumerate() {
                prop_assert_eq!(e.lc(), 1);
                for (b, o) in el.iter().enumerate() {
                    if a != b {
                        prop_assert!(e.terms().iter().all(|t| !o.lm().divides(t.0)));
                    }
                }
            }
            // permuting the generators gives the same reduced basis
            let mut rev = polys.clone();
            rev.reverse();
            let gb2 = buchberger(&r, &rev);
            prop_assert_eq!(gb2.elements(), el);
        }
    }
}
