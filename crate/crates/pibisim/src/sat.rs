//! Satisfaction checking for the modal logic under the possible-worlds
//! interpretation.
//!
//! A world is an equality constraint over the context names. Diamonds look
//! for a step in the current world; boxes quantify over every respecting
//! coarsening of it, which is where the intuitionistic character of the
//! logic shows up. Box-match recurses into the least refinement validating
//! its equations; by hereditariness that single world decides the rest.

use thiserror::Error;

use crate::id_lts;
use crate::open_lts::{context_partition, partition_to_eqc, Ctx, EqC, WorldSubst};
use crate::partition::coarsenings;
use crate::syntax::{free_names, unbind2, ActB, Form, Name, NameSupply, Pr, Tm};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("name {0} does not occur in the context")]
    NameOutOfContext(Name),
    #[error("world violates the context's nabla restrictions")]
    WorldViolatesContext,
}

/// Every world reachable from `world` by further unification that still
/// respects `ctx`, starting with `world` itself.
pub fn respecting_worlds(ctx: &Ctx, world: &EqC) -> Vec<EqC> {
    let (part, index) = context_partition(ctx, world);
    coarsenings(&part)
        .into_iter()
        .map(|p| partition_to_eqc(&p, &index))
        .filter(|w| w.respects(ctx))
        .collect()
}

/// Does `p` satisfy `f` at `world` under `ctx`?
///
/// `p` and `f` need not be pre-instantiated; the world's substitution is
/// applied before evaluation (it is idempotent, so callers that already
/// substituted lose nothing).
pub fn om_sat(
    supply: &mut NameSupply,
    ctx: &Ctx,
    world: &EqC,
    p: &Pr,
    f: &Form,
) -> Result<bool, SatError> {
    for n in free_names(p).iter().chain(free_names(f).iter()) {
        if !ctx.contains(n) {
            return Err(SatError::NameOutOfContext(n.clone()));
        }
    }
    for (x, y) in world.pairs() {
        if !ctx.contains(x) {
            return Err(SatError::NameOutOfContext(x.clone()));
        }
        if !ctx.contains(y) {
            return Err(SatError::NameOutOfContext(y.clone()));
        }
    }
    if !world.respects(ctx) {
        return Err(SatError::WorldViolatesContext);
    }
    supply.observe_value(p);
    supply.observe_value(f);
    for quan in ctx.quans() {
        supply.observe(quan.name());
    }
    let theta = WorldSubst::of(ctx, world);
    Ok(sat_rec(
        supply,
        ctx,
        world,
        &theta.apply(p),
        &theta.apply(f),
    ))
}

fn var_name(t: &Tm) -> &Name {
    match t {
        Tm::Var(n) => n,
        Tm::Bound(_) => unreachable!("match equation mentions an unopened binder"),
    }
}

fn extend_for(act: &ActB, ctx: &Ctx, x: &Name) -> Ctx {
    match act {
        ActB::In(_) => ctx.extend_all(x.clone()),
        ActB::Out(_) => ctx.extend_nabla(x.clone()),
    }
}

/// Core recursion. Invariant: `p` and `f` are already instantiated by
/// `world`'s substitution.
fn sat_rec(supply: &mut NameSupply, ctx: &Ctx, world: &EqC, p: &Pr, f: &Form) -> bool {
    match f {
        Form::False => false,
        Form::True => true,
        Form::Conj(fs) => fs.iter().all(|g| sat_rec(supply, ctx, world, p, g)),
        Form::Disj(fs) => fs.iter().any(|g| sat_rec(supply, ctx, world, p, g)),
        Form::DiaMatch(eqs, g) => {
            let theta = WorldSubst::of(ctx, world);
            eqs.iter().all(|(a, b)| theta.tm(a) == theta.tm(b)) && sat_rec(supply, ctx, world, p, g)
        }
        Form::BoxMatch(eqs, g) => {
            let mut refined = world.clone();
            for (a, b) in eqs {
                refined.insert_pair(var_name(a), var_name(b));
            }
            if !refined.respects(ctx) {
                // No world validates the equations: vacuously true.
                return true;
            }
            let theta = WorldSubst::of(ctx, &refined);
            sat_rec(supply, ctx, &refined, &theta.apply(p), &theta.apply(g))
        }
        Form::Dia(a, g) => id_lts::one(supply, p)
            .into_iter()
            .any(|(l, p1)| l == *a && sat_rec(supply, ctx, world, &p1, g)),
        Form::Box(a, g) => {
            for w in respecting_worlds(ctx, world) {
                let theta = WorldSubst::of(ctx, &w);
                let p_w = theta.apply(p);
                let a_w = theta.apply(a);
                let g_w = theta.apply(&**g);
                for (l, p1) in id_lts::one(supply, &p_w) {
                    if l == a_w && !sat_rec(supply, ctx, &w, &p1, &g_w) {
                        return false;
                    }
                }
            }
            true
        }
        Form::DiaB(a, scope) => id_lts::one_b(supply, p).into_iter().any(|(l, res)| {
            l == *a && {
                let (x, p1, g1) = unbind2(&res, scope, supply);
                let inner_ctx = extend_for(a, ctx, &x);
                sat_rec(supply, &inner_ctx, world, &p1, &g1)
            }
        }),
        Form::BoxB(a, scope) => {
            for w in respecting_worlds(ctx, world) {
                let theta = WorldSubst::of(ctx, &w);
                let p_w = theta.apply(p);
                let a_w = theta.apply(a);
                let scope_w = theta.apply(&**scope);
                for (l, res) in id_lts::one_b(supply, &p_w) {
                    if l != a_w {
                        continue;
                    }
                    let (x, p1, g1) = unbind2(&res, &scope_w, supply);
                    let inner_ctx = extend_for(&a_w, ctx, &x);
                    if !sat_rec(supply, &inner_ctx, &w, &p1, &g1) {
                        return false;
                    }
                }
            }
            true
        }
    }
}
