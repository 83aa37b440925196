//! Shared support for the integration suites: seeded random generators for
//! processes, formulae and worlds, an independent full-enumeration
//! satisfaction oracle, and a canonical form for comparing step forests up
//! to fresh-name choice.

#![allow(dead_code)]

use rand::prelude::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pibisim::bisim::{EagerTree, Side, StepLog};
use pibisim::id_lts;
use pibisim::open_lts::{context_partition, partition_to_eqc, Ctx, EqC, Quan, WorldSubst};
use pibisim::partition::coarsenings;
use pibisim::syntax::{
    substitute, unbind2, Act, ActB, Form, Name, NameSupply, Pr, Scope, Syntax, Tm,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn name_pool(k: usize) -> Vec<Name> {
    ["x", "y", "z", "w"][..k]
        .iter()
        .map(|s| Name::global(*s))
        .collect()
}

fn pick_name(rng: &mut ChaCha8Rng, pool: &[Name]) -> Name {
    pool.choose(rng)
        .expect("name pool must not be empty")
        .clone()
}

fn pick_tm(rng: &mut ChaCha8Rng, pool: &[Name]) -> Tm {
    Tm::Var(pick_name(rng, pool))
}

/// Random finite process of bounded depth drawing free names from `pool`.
/// All eight constructors are reachable.
pub fn gen_process(rng: &mut ChaCha8Rng, depth: usize, pool: &[Name]) -> Pr {
    if depth == 0 {
        return Pr::Null;
    }
    match rng.random_range(0..13u8) {
        0 => Pr::Null,
        1 | 2 => Pr::Tau(Box::new(gen_process(rng, depth - 1, pool))),
        3 | 4 => Pr::Out(
            pick_tm(rng, pool),
            pick_tm(rng, pool),
            Box::new(gen_process(rng, depth - 1, pool)),
        ),
        5 | 6 => {
            let binder = pick_name(rng, pool);
            let body = gen_process(rng, depth - 1, pool);
            Pr::In(pick_tm(rng, pool), Box::new(Scope::bind(&binder, body)))
        }
        7 => Pr::Match(
            pick_tm(rng, pool),
            pick_tm(rng, pool),
            Box::new(gen_process(rng, depth - 1, pool)),
        ),
        8 | 9 => Pr::Plus(
            Box::new(gen_process(rng, depth - 1, pool)),
            Box::new(gen_process(rng, depth - 1, pool)),
        ),
        10 | 11 => Pr::Par(
            Box::new(gen_process(rng, depth - 1, pool)),
            Box::new(gen_process(rng, depth - 1, pool)),
        ),
        _ => {
            let binder = pick_name(rng, pool);
            let body = gen_process(rng, depth - 1, pool);
            Pr::Nu(Box::new(Scope::bind(&binder, body)))
        }
    }
}

pub fn process_size(p: &Pr) -> usize {
    match p {
        Pr::Null => 1,
        Pr::Tau(c) | Pr::Match(_, _, c) | Pr::Out(_, _, c) => 1 + process_size(c),
        Pr::In(_, b) | Pr::Nu(b) => 1 + process_size(b.raw_body()),
        Pr::Plus(a, b) | Pr::Par(a, b) => 1 + process_size(a) + process_size(b),
    }
}

fn gen_act(rng: &mut ChaCha8Rng, pool: &[Name]) -> Act {
    if rng.random_bool(0.5) {
        Act::Tau
    } else {
        Act::Out(pick_tm(rng, pool), pick_tm(rng, pool))
    }
}

fn gen_eqs(rng: &mut ChaCha8Rng, pool: &[Name]) -> Vec<(Tm, Tm)> {
    let n = rng.random_range(1..=2);
    (0..n)
        .map(|_| (pick_tm(rng, pool), pick_tm(rng, pool)))
        .collect()
}

/// Random formula of bounded modal depth over the given names.
pub fn gen_formula(rng: &mut ChaCha8Rng, depth: usize, pool: &[Name]) -> Form {
    if depth == 0 {
        return if rng.random_bool(0.5) {
            Form::True
        } else {
            Form::False
        };
    }
    match rng.random_range(0..12u8) {
        0 => Form::True,
        1 => Form::False,
        2 => {
            let n = rng.random_range(0..=2);
            Form::Conj((0..n).map(|_| gen_formula(rng, depth - 1, pool)).collect())
        }
        3 => {
            let n = rng.random_range(0..=2);
            Form::Disj((0..n).map(|_| gen_formula(rng, depth - 1, pool)).collect())
        }
        4 | 5 => Form::Dia(
            gen_act(rng, pool),
            Box::new(gen_formula(rng, depth - 1, pool)),
        ),
        6 | 7 => Form::Box(
            gen_act(rng, pool),
            Box::new(gen_formula(rng, depth - 1, pool)),
        ),
        8 => gen_bound_form(rng, depth, pool, true),
        9 => gen_bound_form(rng, depth, pool, false),
        10 => Form::DiaMatch(
            gen_eqs(rng, pool),
            Box::new(gen_formula(rng, depth - 1, pool)),
        ),
        _ => Form::BoxMatch(
            gen_eqs(rng, pool),
            Box::new(gen_formula(rng, depth - 1, pool)),
        ),
    }
}

fn gen_bound_form(rng: &mut ChaCha8Rng, depth: usize, pool: &[Name], diamond: bool) -> Form {
    let binder = Name::global("u");
    let mut inner_pool = pool.to_vec();
    inner_pool.push(binder.clone());
    let body = gen_formula(rng, depth - 1, &inner_pool);
    let act = if rng.random_bool(0.5) {
        ActB::In(pick_tm(rng, pool))
    } else {
        ActB::Out(pick_tm(rng, pool))
    };
    let scope = Box::new(Scope::bind(&binder, body));
    if diamond {
        Form::DiaB(act, scope)
    } else {
        Form::BoxB(act, scope)
    }
}

/// Random context over `pool` (oldest first) with random quantifiers.
pub fn gen_ctx(rng: &mut ChaCha8Rng, pool: &[Name]) -> Ctx {
    let mut ctx = Ctx::empty();
    for n in pool {
        ctx = if rng.random_bool(0.75) {
            ctx.extend_all(n.clone())
        } else {
            ctx.extend_nabla(n.clone())
        };
    }
    ctx
}

/// All worlds (equality constraints) over `ctx` that respect it, starting
/// from the given base world.
pub fn respecting_worlds_from(ctx: &Ctx, base: &EqC) -> Vec<EqC> {
    let (part, index) = context_partition(ctx, base);
    coarsenings(&part)
        .into_iter()
        .map(|p| partition_to_eqc(&p, &index))
        .filter(|w| w.respects(ctx))
        .collect()
}

/// Does `world` already validate every pair of `sigma`?
pub fn entails(ctx: &Ctx, world: &EqC, sigma: &EqC) -> bool {
    let (part, index) = context_partition(ctx, world);
    sigma
        .pairs()
        .iter()
        .all(|(x, y)| part.same_class(index.index_of(x), index.index_of(y)))
}

/// Independent satisfaction oracle: identical possible-worlds semantics but
/// with box-match evaluated by brute-force enumeration of every respecting
/// world validating its equations, with no least-world shortcut.
pub fn om_sat_enum(supply: &mut NameSupply, ctx: &Ctx, world: &EqC, p: &Pr, f: &Form) -> bool {
    let theta = WorldSubst::of(ctx, world);
    enum_rec(supply, ctx, world, &theta.apply(p), &theta.apply(f))
}

fn enum_extend(act: &ActB, ctx: &Ctx, x: &Name) -> Ctx {
    match act {
        ActB::In(_) => ctx.extend_all(x.clone()),
        ActB::Out(_) => ctx.extend_nabla(x.clone()),
    }
}

fn enum_rec(supply: &mut NameSupply, ctx: &Ctx, world: &EqC, p: &Pr, f: &Form) -> bool {
    match f {
        Form::False => false,
        Form::True => true,
        Form::Conj(fs) => fs.iter().all(|g| enum_rec(supply, ctx, world, p, g)),
        Form::Disj(fs) => fs.iter().any(|g| enum_rec(supply, ctx, world, p, g)),
        Form::DiaMatch(eqs, g) => {
            let theta = WorldSubst::of(ctx, world);
            eqs.iter().all(|(a, b)| theta.tm(a) == theta.tm(b))
                && enum_rec(supply, ctx, world, p, g)
        }
        Form::BoxMatch(eqs, g) => {
            for w in respecting_worlds_from(ctx, world) {
                let theta = WorldSubst::of(ctx, &w);
                let holds = eqs.iter().all(|(a, b)| theta.tm(a) == theta.tm(b));
                if holds && !enum_rec(supply, ctx, &w, &theta.apply(p), &theta.apply(&**g)) {
                    return false;
                }
            }
            true
        }
        Form::Dia(a, g) => id_lts::one(supply, p)
            .into_iter()
            .any(|(l, p1)| l == *a && enum_rec(supply, ctx, world, &p1, g)),
        Form::Box(a, g) => {
            for w in respecting_worlds_from(ctx, world) {
                let theta = WorldSubst::of(ctx, &w);
                let p_w = theta.apply(p);
                let a_w = theta.apply(a);
                let g_w = theta.apply(&**g);
                for (l, p1) in id_lts::one(supply, &p_w) {
                    if l == a_w && !enum_rec(supply, ctx, &w, &p1, &g_w) {
                        return false;
                    }
                }
            }
            true
        }
        Form::DiaB(a, scope) => id_lts::one_b(supply, p).into_iter().any(|(l, res)| {
            l == *a && {
                let (x, p1, g1) = unbind2(&res, scope, supply);
                enum_rec(supply, &enum_extend(a, ctx, &x), world, &p1, &g1)
            }
        }),
        Form::BoxB(a, scope) => {
            for w in respecting_worlds_from(ctx, world) {
                let theta = WorldSubst::of(ctx, &w);
                let p_w = theta.apply(p);
                let a_w = theta.apply(a);
                let scope_w = theta.apply(&**scope);
                for (l, res) in id_lts::one_b(supply, &p_w) {
                    if l != a_w {
                        continue;
                    }
                    let (x, p1, g1) = unbind2(&res, &scope_w, supply);
                    if !enum_rec(supply, &enum_extend(&a_w, ctx, &x), &w, &p1, &g1) {
                        return false;
                    }
                }
            }
            true
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical forests
//
// Fresh binder names differ between runs, so two forests are compared after
// renaming every name introduced below the top context to a reserved
// canonical name determined by its path.

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonTree {
    pub side: Side,
    pub log: StepLog,
    pub children: Vec<CanonTree>,
}

fn rename_name(map: &[(Name, Name)], n: &Name) -> Name {
    map.iter()
        .find(|(old, _)| old == n)
        .map(|(_, new)| new.clone())
        .unwrap_or_else(|| n.clone())
}

fn rename_value<T: Syntax>(map: &[(Name, Name)], v: &T) -> T {
    let mut out = v.clone();
    for (old, new) in map {
        out = substitute(&out, old, &Tm::Var(new.clone()));
    }
    out
}

fn rename_ctx(map: &[(Name, Name)], ctx: &Ctx) -> Ctx {
    Ctx::from_quans(
        ctx.quans()
            .iter()
            .map(|q| match q {
                Quan::All(n) => Quan::All(rename_name(map, n)),
                Quan::Nabla(n) => Quan::Nabla(rename_name(map, n)),
            })
            .collect(),
    )
}

fn rename_eqc(map: &[(Name, Name)], sigma: &EqC) -> EqC {
    EqC::from_pairs(
        sigma
            .pairs()
            .iter()
            .map(|(x, y)| (rename_name(map, x), rename_name(map, y))),
    )
}

fn rename_log(map: &[(Name, Name)], log: &StepLog) -> StepLog {
    match log {
        StepLog::Free {
            ctx,
            constraint,
            act,
            residual,
        } => StepLog::Free {
            ctx: rename_ctx(map, ctx),
            constraint: rename_eqc(map, constraint),
            act: rename_value(map, act),
            residual: rename_value(map, residual),
        },
        StepLog::Bound {
            ctx,
            constraint,
            act,
            residual,
        } => StepLog::Bound {
            ctx: rename_ctx(map, ctx),
            constraint: rename_eqc(map, constraint),
            act: rename_value(map, act),
            residual: rename_value(map, residual),
        },
    }
}

fn canon_tree(tree: &EagerTree, ctx_len: usize, map: Vec<(Name, Name)>) -> CanonTree {
    let node_ctx_len = tree.log.ctx().len();
    let mut map = map;
    if node_ctx_len > ctx_len {
        // One name was introduced by the enclosing bound step; rename it to
        // a reserved canonical name indexed by the nesting depth.
        let fresh = tree.log.ctx().quans()[0].name().clone();
        let canonical = Name::new("~", map.len() as u32);
        map.push((fresh, canonical));
    }
    CanonTree {
        side: tree.side,
        log: rename_log(&map, &tree.log),
        children: tree
            .children
            .iter()
            .map(|c| canon_tree(c, node_ctx_len, map.clone()))
            .collect(),
    }
}

pub fn canon_forest(forest: &[EagerTree], top_ctx_len: usize) -> Vec<CanonTree> {
    forest
        .iter()
        .map(|t| canon_tree(t, top_ctx_len, Vec::new()))
        .collect()
}

fn flip_side(side: Side) -> Side {
    match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

pub fn flip_canon(tree: &CanonTree) -> CanonTree {
    CanonTree {
        side: flip_side(tree.side),
        log: tree.log.clone(),
        children: tree.children.iter().map(flip_canon).collect(),
    }
}

/// Forest equality up to the regrouping a swapped run causes: the two root
/// groups of a bisimulation forest (left-led and right-led) appear in
/// swapped order, recursively below every follower.
pub fn forests_mirror_eq(a: &[CanonTree], b_flipped: &[CanonTree]) -> bool {
    let split = |f: &[CanonTree]| -> (Vec<CanonTree>, Vec<CanonTree>) {
        (
            f.iter().filter(|t| t.side == Side::Left).cloned().collect(),
            f.iter()
                .filter(|t| t.side == Side::Right)
                .cloned()
                .collect(),
        )
    };
    let (al, ar) = split(a);
    let (bl, br) = split(b_flipped);
    al.len() == bl.len()
        && ar.len() == br.len()
        && al.iter().zip(&bl).all(|(x, y)| leader_mirror_eq(x, y))
        && ar.iter().zip(&br).all(|(x, y)| leader_mirror_eq(x, y))
}

fn leader_mirror_eq(a: &CanonTree, b: &CanonTree) -> bool {
    a.side == b.side
        && a.log == b.log
        && a.children.len() == b.children.len()
        && a.children.iter().zip(&b.children).all(|(x, y)| {
            x.side == y.side && x.log == y.log && forests_mirror_eq(&x.children, &y.children)
        })
}
