//! Symbolic one-step semantics over all possible worlds.
//!
//! Each step carries the equality constraint ([`EqC`]) under which it is
//! enabled. Constraints are checked against a quantifier context ([`Ctx`]):
//! a nabla-quantified name may be unified only with names introduced later,
//! which the integer partition model captures by requiring nabla names to be
//! the minima of their classes.

use std::collections::BTreeMap;

use crate::partition::Partition;
use crate::syntax::{substitute, unbind2, Act, ActB, Name, NameSupply, Pr, PrB, Scope, Syntax, Tm};

/// A canonical set of name-pair equality constraints.
///
/// Every stored pair `(x, y)` satisfies `x < y` in the name order; the list
/// is sorted and duplicate-free. The empty constraint is the current world.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct EqC(Vec<(Name, Name)>);

impl EqC {
    pub fn empty() -> EqC {
        EqC::default()
    }

    /// Canonicalize an arbitrary pair list: orient, drop reflexive pairs,
    /// sort, deduplicate.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Name, Name)>) -> EqC {
        let mut out = EqC::empty();
        for (x, y) in pairs {
            out.insert_pair(&x, &y);
        }
        out
    }

    /// Insert one equation, keeping the canonical form. Reflexive pairs are
    /// dropped and the smaller name goes first.
    pub fn insert_pair(&mut self, x: &Name, y: &Name) {
        let pair = match x.cmp(y) {
            std::cmp::Ordering::Less => (x.clone(), y.clone()),
            std::cmp::Ordering::Equal => return,
            std::cmp::Ordering::Greater => (y.clone(), x.clone()),
        };
        if let Err(at) = self.0.binary_search(&pair) {
            self.0.insert(at, pair);
        }
    }

    pub fn inserted(&self, x: &Name, y: &Name) -> EqC {
        let mut out = self.clone();
        out.insert_pair(x, y);
        out
    }

    /// Duplicate-free union.
    pub fn union(&self, other: &EqC) -> EqC {
        let mut out = self.clone();
        for (x, y) in &other.0 {
            out.insert_pair(x, y);
        }
        out
    }

    pub fn pairs(&self) -> &[(Name, Name)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff the constraint is a legal refinement under `ctx`: every
    /// nabla name remains the representative of its class.
    pub fn respects(&self, ctx: &Ctx) -> bool {
        let (part, index) = context_partition(ctx, self);
        ctx.quans().iter().all(|q| match q {
            Quan::Nabla(x) => {
                let i = index.index_of(x);
                part.rep(i) == i
            }
            Quan::All(_) => true,
        })
    }

    /// True iff `world` already validates every equation of `self`.
    pub fn entailed_by(&self, world: &EqC, ctx: &Ctx) -> bool {
        let (part, index) = context_partition(ctx, world);
        self.pairs()
            .iter()
            .all(|(x, y)| part.same_class(index.index_of(x), index.index_of(y)))
    }
}

/// A quantified context entry.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Quan {
    All(Name),
    Nabla(Name),
}

impl Quan {
    pub fn name(&self) -> &Name {
        match self {
            Quan::All(n) | Quan::Nabla(n) => n,
        }
    }
}

/// A quantifier context, most recently introduced name first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Ctx(Vec<Quan>);

impl Ctx {
    pub fn empty() -> Ctx {
        Ctx::default()
    }

    /// Context from entries given most-recent-first.
    pub fn from_quans(quans: Vec<Quan>) -> Ctx {
        let ctx = Ctx(quans);
        debug_assert!(ctx.names_distinct(), "context names must be distinct");
        ctx
    }

    /// All-universal context over names given oldest-first, as used for the
    /// top level of a bisimulation run.
    pub fn forall(names_oldest_first: impl IntoIterator<Item = Name>) -> Ctx {
        let mut quans: Vec<Quan> = names_oldest_first.into_iter().map(Quan::All).collect();
        quans.reverse();
        Ctx::from_quans(quans)
    }

    pub fn extend_all(&self, n: Name) -> Ctx {
        let mut quans = Vec::with_capacity(self.0.len() + 1);
        quans.push(Quan::All(n));
        quans.extend(self.0.iter().cloned());
        Ctx::from_quans(quans)
    }

    pub fn extend_nabla(&self, n: Name) -> Ctx {
        let mut quans = Vec::with_capacity(self.0.len() + 1);
        quans.push(Quan::Nabla(n));
        quans.extend(self.0.iter().cloned());
        Ctx::from_quans(quans)
    }

    /// Entries, most recent first.
    pub fn quans(&self) -> &[Quan] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, n: &Name) -> bool {
        self.0.iter().any(|q| q.name() == n)
    }

    /// Names oldest-first, the order of the integer encoding.
    pub fn names_oldest_first(&self) -> Vec<Name> {
        self.0.iter().rev().map(|q| q.name().clone()).collect()
    }

    fn names_distinct(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.0.iter().all(|q| seen.insert(q.name().clone()))
    }
}

/// Bijection between context names and partition elements. Older names map
/// to smaller integers.
pub struct NameIndex {
    oldest_first: Vec<Name>,
}

impl NameIndex {
    pub fn index_of(&self, n: &Name) -> usize {
        self.oldest_first
            .iter()
            .position(|m| m == n)
            .unwrap_or_else(|| panic!("name {n} not in context"))
    }

    pub fn name_of(&self, i: usize) -> &Name {
        &self.oldest_first[i]
    }

    pub fn len(&self) -> usize {
        self.oldest_first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oldest_first.is_empty()
    }
}

/// The partition induced by a constraint under a context's name encoding.
pub fn context_partition(ctx: &Ctx, sigma: &EqC) -> (Partition, NameIndex) {
    let index = NameIndex {
        oldest_first: ctx.names_oldest_first(),
    };
    let mut part = Partition::discrete(index.len());
    for (x, y) in sigma.pairs() {
        part = part.join(index.index_of(x), index.index_of(y));
    }
    (part, index)
}

/// Convert a partition back to its canonical constraint: one pair per
/// non-representative member.
pub fn partition_to_eqc(part: &Partition, index: &NameIndex) -> EqC {
    let mut out = EqC::empty();
    for i in 0..part.len() {
        let r = part.rep(i);
        if r != i {
            out.insert_pair(index.name_of(r), index.name_of(i));
        }
    }
    out
}

/// The substitution a world induces: every context name goes to the oldest
/// name of its equivalence class. Names outside the context are fixed, and
/// the map is idempotent.
#[derive(Clone, Debug)]
pub struct WorldSubst {
    map: BTreeMap<Name, Name>,
}

impl WorldSubst {
    pub fn identity() -> WorldSubst {
        WorldSubst {
            map: BTreeMap::new(),
        }
    }

    pub fn of(ctx: &Ctx, sigma: &EqC) -> WorldSubst {
        let (part, index) = context_partition(ctx, sigma);
        let mut map = BTreeMap::new();
        for i in 0..part.len() {
            let r = part.rep(i);
            if r != i {
                map.insert(index.name_of(i).clone(), index.name_of(r).clone());
            }
        }
        WorldSubst { map }
    }

    pub fn name(&self, n: &Name) -> Name {
        self.map.get(n).cloned().unwrap_or_else(|| n.clone())
    }

    pub fn tm(&self, t: &Tm) -> Tm {
        match t {
            Tm::Var(n) => Tm::Var(self.name(n)),
            Tm::Bound(k) => Tm::Bound(*k),
        }
    }

    pub fn apply<T: Syntax>(&self, t: &T) -> T {
        let mut out = t.clone();
        out.map_terms(0, &mut |_, tm| {
            if let Tm::Var(n) = tm {
                if let Some(m) = self.map.get(n) {
                    *tm = Tm::Var(m.clone());
                }
            }
        });
        out
    }
}

/// All symbolic free steps of `p` under `ctx`, each with the constraint that
/// enables it. `ctx` must close `p`.
pub fn one(supply: &mut NameSupply, ctx: &Ctx, p: &Pr) -> Vec<(EqC, (Act, Pr))> {
    // Restricted names opened below must stay clear of the context.
    for quan in ctx.quans() {
        supply.observe(quan.name());
    }
    let mut out = Vec::new();
    match p {
        Pr::Out(x, y, cont) => out.push((
            EqC::empty(),
            (Act::Out(x.clone(), y.clone()), (**cont).clone()),
        )),
        Pr::Tau(cont) => out.push((EqC::empty(), (Act::Tau, (**cont).clone()))),
        Pr::Match(Tm::Var(x), Tm::Var(y), cont) => {
            if x == y {
                out.extend(one(supply, ctx, cont));
            } else if EqC::from_pairs([(x.clone(), y.clone())]).respects(ctx) {
                for (sigma, r) in one(supply, ctx, cont) {
                    let extended = sigma.inserted(x, y);
                    if extended.respects(ctx) {
                        out.push((extended, r));
                    }
                }
            }
        }
        Pr::Match(_, _, _) => {}
        Pr::Plus(p, q) => {
            out.extend(one(supply, ctx, p));
            out.extend(one(supply, ctx, q));
        }
        Pr::Par(p, q) => {
            for (sigma, (l, p1)) in one(supply, ctx, p) {
                out.push((sigma, (l, Pr::Par(Box::new(p1), q.clone()))));
            }
            for (sigma, (l, q1)) in one(supply, ctx, q) {
                out.push((sigma, (l, Pr::Par(p.clone(), Box::new(q1)))));
            }
            // close
            let bp = one_b(supply, ctx, p);
            let bq = one_b(supply, ctx, q);
            for (sp, (lp, scope_p)) in &bp {
                for (sq, (lq, scope_q)) in &bq {
                    let chans = match (lp, lq) {
                        (ActB::Out(Tm::Var(x)), ActB::In(Tm::Var(x2)))
                        | (ActB::In(Tm::Var(x2)), ActB::Out(Tm::Var(x))) => {
                            Some((x.clone(), x2.clone()))
                        }
                        _ => None,
                    };
                    if let Some((x, x2)) = chans {
                        let combined = sp.union(sq).inserted(&x, &x2);
                        if combined.respects(ctx) {
                            let (y, p1, q1) = unbind2(scope_p, scope_q, supply);
                            let body = Pr::Par(Box::new(p1), Box::new(q1));
                            out.push((
                                combined,
                                (Act::Tau, Pr::Nu(Box::new(Scope::bind(&y, body)))),
                            ));
                        }
                    }
                }
            }
            // interaction
            for (sp, (lp, p1)) in one(supply, ctx, p) {
                if let Act::Out(Tm::Var(x), v) = &lp {
                    for (sq, (lq, scope_q)) in &bq {
                        if let ActB::In(Tm::Var(x2)) = lq {
                            let combined = sp.union(sq).inserted(x, x2);
                            if combined.respects(ctx) {
                                let (y, q1) = scope_q.unbind(supply);
                                let q1 = substitute(&q1, &y, v);
                                out.push((
                                    combined,
                                    (Act::Tau, Pr::Par(Box::new(p1.clone()), Box::new(q1))),
                                ));
                            }
                        }
                    }
                }
            }
            for (sp, (lp, scope_p)) in &bp {
                if let ActB::In(Tm::Var(x2)) = lp {
                    for (sq, (lq, q1)) in one(supply, ctx, q) {
                        if let Act::Out(Tm::Var(x), v) = &lq {
                            let combined = sp.union(&sq).inserted(x, x2);
                            if combined.respects(ctx) {
                                let (y, p1) = scope_p.unbind(supply);
                                let p1 = substitute(&p1, &y, v);
                                out.push((
                                    combined,
                                    (Act::Tau, Pr::Par(Box::new(p1), Box::new(q1.clone()))),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Pr::Nu(b) => {
            let (x, inner) = b.unbind(supply);
            let inner_ctx = ctx.extend_nabla(x.clone());
            for (sigma, (l, p1)) in one(supply, &inner_ctx, &inner) {
                let world = WorldSubst::of(&inner_ctx, &sigma);
                let mentions_x = match &l {
                    Act::Out(Tm::Var(ch), Tm::Var(pay)) => {
                        x == world.name(ch) || x == world.name(pay)
                    }
                    _ => false,
                };
                if !mentions_x {
                    out.push((sigma, (l, Pr::Nu(Box::new(Scope::bind(&x, p1))))));
                }
            }
        }
        Pr::Null | Pr::In(_, _) => {}
    }
    out
}

/// All symbolic bound steps of `p` under `ctx`.
pub fn one_b(supply: &mut NameSupply, ctx: &Ctx, p: &Pr) -> Vec<(EqC, (ActB, PrB))> {
    for quan in ctx.quans() {
        supply.observe(quan.name());
    }
    let mut out = Vec::new();
    match p {
        Pr::In(x, b) => out.push((EqC::empty(), (ActB::In(x.clone()), (**b).clone()))),
        Pr::Match(Tm::Var(x), Tm::Var(y), cont) => {
            if x == y {
                out.extend(one_b(supply, ctx, cont));
            } else if EqC::from_pairs([(x.clone(), y.clone())]).respects(ctx) {
                for (sigma, r) in one_b(supply, ctx, cont) {
                    let extended = sigma.inserted(x, y);
                    if extended.respects(ctx) {
                        out.push((extended, r));
                    }
                }
            }
        }
        Pr::Match(_, _, _) => {}
        Pr::Plus(p, q) => {
            out.extend(one_b(supply, ctx, p));
            out.extend(one_b(supply, ctx, q));
        }
        Pr::Par(p, q) => {
            for (sigma, (l, (x, p1))) in one_b_open(supply, ctx, p) {
                let body = Pr::Par(Box::new(p1), q.clone());
                out.push((sigma, (l, Scope::bind(&x, body))));
            }
            for (sigma, (l, (x, q1))) in one_b_open(supply, ctx, q) {
                let body = Pr::Par(p.clone(), Box::new(q1));
                out.push((sigma, (l, Scope::bind(&x, body))));
            }
        }
        Pr::Nu(b) => {
            let (x, inner) = b.unbind(supply);
            let inner_ctx = ctx.extend_nabla(x.clone());
            for (sigma, (l, (y, p1))) in one_b_open(supply, &inner_ctx, &inner) {
                let world = WorldSubst::of(&inner_ctx, &sigma);
                let mentions_x = match &l {
                    ActB::Out(Tm::Var(ch)) | ActB::In(Tm::Var(ch)) => x == world.name(ch),
                    _ => false,
                };
                if !mentions_x {
                    let rewrapped = Pr::Nu(Box::new(Scope::bind(&x, p1)));
                    out.push((sigma, (l, Scope::bind(&y, rewrapped))));
                }
            }
            // open scope extrusion
            for (sigma, (l, p1)) in one(supply, &inner_ctx, &inner) {
                if let Act::Out(ch, Tm::Var(pay)) = &l {
                    let world = WorldSubst::of(&inner_ctx, &sigma);
                    if x == world.name(pay) && Tm::Var(x.clone()) != world.tm(ch) {
                        out.push((sigma, (ActB::Out(ch.clone()), Scope::bind(&x, p1))));
                    }
                }
            }
        }
        Pr::Null | Pr::Tau(_) | Pr::Out(_, _, _) => {}
    }
    out
}

/// Symbolic bound steps with the residual binder opened by a fresh name.
#[allow(clippy::type_complexity)]
pub fn one_b_open(supply: &mut NameSupply, ctx: &Ctx, p: &Pr) -> Vec<(EqC, (ActB, (Name, Pr)))> {
    one_b(supply, ctx, p)
        .into_iter()
        .map(|(sigma, (l, b))| {
            let opened = b.unbind(supply);
            (sigma, (l, opened))
        })
        .collect()
}
