//! Abstract syntax for processes, actions and modal formulae.
//!
//! Binders use a locally nameless representation: bound occurrences are
//! de Bruijn indices stored in [`Tm::Bound`], so derived structural equality
//! is alpha-equivalence. Fresh free names come from a [`NameSupply`] with a
//! monotone per-base counter, threaded through every computation that opens
//! binders.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// A free name: short base identifier plus a freshness index.
///
/// Two names are equal iff both base and index are equal. The total order is
/// lexicographic on `(base, index)`; constraint canonicalization relies on it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name {
    base: String,
    index: u32,
}

impl Name {
    pub fn new(base: impl Into<String>, index: u32) -> Name {
        Name {
            base: base.into(),
            index,
        }
    }

    /// A user-level name with index 0.
    pub fn global(base: impl Into<String>) -> Name {
        Name::new(base, 0)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn index(&self) -> u32 {
        self.index
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}{}", self.base, self.index)
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Session-scoped source of fresh names.
///
/// Every name fed to [`NameSupply::observe`] (directly or via
/// [`NameSupply::observe_value`]) bumps the per-base counter, so a later
/// [`NameSupply::fresh`] with the same base can never collide with it.
#[derive(Default, Debug, Clone)]
pub struct NameSupply {
    next: HashMap<String, u32>,
}

impl NameSupply {
    pub fn new() -> NameSupply {
        NameSupply::default()
    }

    pub fn observe(&mut self, n: &Name) {
        let e = self.next.entry(n.base.clone()).or_insert(0);
        *e = (*e).max(n.index + 1);
    }

    /// Observe every free name occurring in a syntax value.
    pub fn observe_value<T: Syntax>(&mut self, t: &T) {
        t.visit_terms(0, &mut |_, tm| {
            if let Tm::Var(n) = tm {
                let e = self.next.entry(n.base.clone()).or_insert(0);
                *e = (*e).max(n.index + 1);
            }
        });
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        let e = self.next.entry(base.to_string()).or_insert(0);
        let index = *e;
        *e += 1;
        Name::new(base, index)
    }
}

/// A term: in the name-passing calculus, a term is a name.
///
/// `Bound` is the locally nameless representation of an occurrence captured
/// by the `k`-th enclosing [`Scope`]; it never appears outside a scope body.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tm {
    Var(Name),
    Bound(u32),
}

impl Tm {
    pub fn var(n: impl Into<String>) -> Tm {
        Tm::Var(Name::global(n))
    }
}

/// Free actions: free output of a payload on a channel, or the silent step.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Act {
    Out(Tm, Tm),
    Tau,
}

/// Bound actions: bound output (scope extrusion) and input, by channel.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ActB {
    Out(Tm),
    In(Tm),
}

/// Finite pi-calculus processes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Pr {
    Null,
    /// Silent prefix `tau.P`.
    Tau(Box<Pr>),
    /// Free output `x!y.P`.
    Out(Tm, Tm, Box<Pr>),
    /// Input `x?(y).P`; the payload binder lives in the scope.
    In(Tm, Box<PrB>),
    /// Match prefix `[x=y]P`.
    Match(Tm, Tm, Box<Pr>),
    Plus(Box<Pr>, Box<Pr>),
    Par(Box<Pr>, Box<Pr>),
    /// Name restriction `nu(x)P`.
    Nu(Box<PrB>),
}

pub type PrB = Scope<Pr>;

/// Formulae of the modal logic characterizing open bisimilarity.
///
/// Box and diamond are not De Morgan duals here, hence the separate match
/// modalities and the pairs of bound modalities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Form {
    False,
    True,
    Conj(Vec<Form>),
    Disj(Vec<Form>),
    Dia(Act, Box<Form>),
    Box(Act, Box<Form>),
    DiaB(ActB, Box<FormB>),
    BoxB(ActB, Box<FormB>),
    DiaMatch(Vec<(Tm, Tm)>, Box<Form>),
    BoxMatch(Vec<(Tm, Tm)>, Box<Form>),
}

pub type FormB = Scope<Form>;

/// Generic traversal over the term positions of a syntax value.
///
/// `depth` counts the scopes enclosing the visited position, which is all a
/// traversal needs to interpret `Tm::Bound` indices.
pub trait Syntax: Clone {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm));
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm));
}

impl Syntax for Tm {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm)) {
        f(depth, self);
    }
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm)) {
        f(depth, self);
    }
}

impl Syntax for Act {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm)) {
        match self {
            Act::Out(x, y) => {
                f(depth, x);
                f(depth, y);
            }
            Act::Tau => {}
        }
    }
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm)) {
        match self {
            Act::Out(x, y) => {
                f(depth, x);
                f(depth, y);
            }
            Act::Tau => {}
        }
    }
}

impl Syntax for ActB {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm)) {
        match self {
            ActB::Out(x) | ActB::In(x) => f(depth, x),
        }
    }
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm)) {
        match self {
            ActB::Out(x) | ActB::In(x) => f(depth, x),
        }
    }
}

impl Syntax for Pr {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm)) {
        match self {
            Pr::Null => {}
            Pr::Tau(p) => p.map_terms(depth, f),
            Pr::Out(x, y, p) => {
                f(depth, x);
                f(depth, y);
                p.map_terms(depth, f);
            }
            Pr::In(x, b) => {
                f(depth, x);
                b.map_terms(depth, f);
            }
            Pr::Match(x, y, p) => {
                f(depth, x);
                f(depth, y);
                p.map_terms(depth, f);
            }
            Pr::Plus(p, q) | Pr::Par(p, q) => {
                p.map_terms(depth, f);
                q.map_terms(depth, f);
            }
            Pr::Nu(b) => b.map_terms(depth, f),
        }
    }
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm)) {
        match self {
            Pr::Null => {}
            Pr::Tau(p) => p.visit_terms(depth, f),
            Pr::Out(x, y, p) => {
                f(depth, x);
                f(depth, y);
                p.visit_terms(depth, f);
            }
            Pr::In(x, b) => {
                f(depth, x);
                b.visit_terms(depth, f);
            }
            Pr::Match(x, y, p) => {
                f(depth, x);
                f(depth, y);
                p.visit_terms(depth, f);
            }
            Pr::Plus(p, q) | Pr::Par(p, q) => {
                p.visit_terms(depth, f);
                q.visit_terms(depth, f);
            }
            Pr::Nu(b) => b.visit_terms(depth, f),
        }
    }
}

impl Syntax for Form {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm)) {
        match self {
            Form::False | Form::True => {}
            Form::Conj(fs) | Form::Disj(fs) => {
                for g in fs {
                    g.map_terms(depth, f);
                }
            }
            Form::Dia(a, g) | Form::Box(a, g) => {
                a.map_terms(depth, f);
                g.map_terms(depth, f);
            }
            Form::DiaB(a, b) | Form::BoxB(a, b) => {
                a.map_terms(depth, f);
                b.map_terms(depth, f);
            }
            Form::DiaMatch(eqs, g) | Form::BoxMatch(eqs, g) => {
                for (x, y) in eqs {
                    f(depth, x);
                    f(depth, y);
                }
                g.map_terms(depth, f);
            }
        }
    }
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm)) {
        match self {
            Form::False | Form::True => {}
            Form::Conj(fs) | Form::Disj(fs) => {
                for g in fs {
                    g.visit_terms(depth, f);
                }
            }
            Form::Dia(a, g) | Form::Box(a, g) => {
                a.visit_terms(depth, f);
                g.visit_terms(depth, f);
            }
            Form::DiaB(a, b) | Form::BoxB(a, b) => {
                a.visit_terms(depth, f);
                b.visit_terms(depth, f);
            }
            Form::DiaMatch(eqs, g) | Form::BoxMatch(eqs, g) => {
                for (x, y) in eqs {
                    f(depth, x);
                    f(depth, y);
                }
                g.visit_terms(depth, f);
            }
        }
    }
}

impl<A: Syntax, B: Syntax> Syntax for (A, B) {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm)) {
        self.0.map_terms(depth, f);
        self.1.map_terms(depth, f);
    }
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm)) {
        self.0.visit_terms(depth, f);
        self.1.visit_terms(depth, f);
    }
}

/// A value abstracted over one name.
///
/// The binder name survives only as a display hint; equality and ordering
/// look at the body alone, which is what makes structural equality
/// alpha-equivalence.
#[derive(Clone, Debug)]
pub struct Scope<T> {
    hint: String,
    body: T,
}

impl<T: PartialEq> PartialEq for Scope<T> {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl<T: Eq> Eq for Scope<T> {}

impl<T: PartialOrd> PartialOrd for Scope<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.body.partial_cmp(&other.body)
    }
}

impl<T: Ord> Ord for Scope<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.body.cmp(&other.body)
    }
}

impl<T: Syntax> Syntax for Scope<T> {
    fn map_terms(&mut self, depth: u32, f: &mut dyn FnMut(u32, &mut Tm)) {
        self.body.map_terms(depth + 1, f);
    }
    fn visit_terms(&self, depth: u32, f: &mut dyn FnMut(u32, &Tm)) {
        self.body.visit_terms(depth + 1, f);
    }
}

impl<T: Syntax> Scope<T> {
    /// Abstract `body` over `name`, turning its free occurrences into bound
    /// indices.
    pub fn bind(name: &Name, mut body: T) -> Scope<T> {
        body.map_terms(0, &mut |depth, tm| {
            if matches!(tm, Tm::Var(n) if n == name) {
                *tm = Tm::Bound(depth);
            }
        });
        Scope {
            hint: name.base.clone(),
            body,
        }
    }

    /// Open the scope with a caller-chosen name. The name must be fresh for
    /// the body or the result conflates distinct names.
    pub fn open_with(&self, name: &Name) -> T {
        let mut body = self.body.clone();
        body.map_terms(0, &mut |depth, tm| {
            if matches!(tm, Tm::Bound(k) if *k == depth) {
                *tm = Tm::Var(name.clone());
            }
        });
        body
    }

    /// Open the scope with a globally fresh name derived from the hint.
    pub fn unbind(&self, supply: &mut NameSupply) -> (Name, T) {
        supply.observe_value(&self.body);
        let name = supply.fresh(&self.hint);
        let body = self.open_with(&name);
        (name, body)
    }

    pub fn hint(&self) -> &str {
        &self.hint
    }

    /// The raw body, with bound occurrences still represented as indices.
    pub fn raw_body(&self) -> &T {
        &self.body
    }
}

/// Open two scopes with one common fresh name.
pub fn unbind2<A: Syntax, B: Syntax>(
    a: &Scope<A>,
    b: &Scope<B>,
    supply: &mut NameSupply,
) -> (Name, A, B) {
    supply.observe_value(&a.body);
    supply.observe_value(&b.body);
    let name = supply.fresh(&a.hint);
    (name.clone(), a.open_with(&name), b.open_with(&name))
}

/// Capture-avoiding substitution of `to` for every free occurrence of `from`.
pub fn substitute<T: Syntax>(t: &T, from: &Name, to: &Tm) -> T {
    debug_assert!(
        !matches!(to, Tm::Bound(_)),
        "substitution image must be locally closed"
    );
    let mut out = t.clone();
    out.map_terms(0, &mut |_, tm| {
        if matches!(tm, Tm::Var(n) if n == from) {
            *tm = to.clone();
        }
    });
    out
}

/// The set of free names of a syntax value.
pub fn free_names<T: Syntax>(t: &T) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    t.visit_terms(0, &mut |_, tm| {
        if let Tm::Var(n) = tm {
            out.insert(n.clone());
        }
    });
    out
}

/// Free names in order of first occurrence (used to build contexts).
pub fn free_names_ordered<T: Syntax>(t: &T) -> Vec<Name> {
    let mut out = Vec::new();
    t.visit_terms(0, &mut |_, tm| {
        if let Tm::Var(n) = tm {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
    });
    out
}

/// Conjunction with the obvious simplifications: units dropped, empty
/// conjunction is truth, singletons unwrapped.
pub fn conj(fs: Vec<Form>) -> Form {
    let mut fs: Vec<Form> = fs.into_iter().filter(|f| *f != Form::True).collect();
    match fs.len() {
        0 => Form::True,
        1 => fs.pop().unwrap(),
        _ => Form::Conj(fs),
    }
}

/// Disjunction, dual to [`conj`].
pub fn disj(fs: Vec<Form>) -> Form {
    let mut fs: Vec<Form> = fs.into_iter().filter(|f| *f != Form::False).collect();
    match fs.len() {
        0 => Form::False,
        1 => fs.pop().unwrap(),
        _ => Form::Disj(fs),
    }
}
