//! Distinguishing-formula generation.
//!
//! A nonempty bisimulation step forest of a non-bisimilar pair is folded
//! into pairs `(fL, fR)` where the left process satisfies `fL` but the right
//! does not, and symmetrically for `fR`. Box and diamond are not dual in
//! this logic, so both sides need their own formula.
//!
//! A leading step without followers yields a base certificate: the leader
//! can act in its world (diamond under a box-match), while every matching
//! move of the opponent is confined to the sibling worlds collected by
//! [`subs_matching_act`]. A leading step whose followers all fail
//! recursively yields an inductive certificate combining the follower
//! residuals' certificates.

use crate::bisim::{Side, StepLog, StepTree};
use crate::open_lts::{Ctx, EqC, WorldSubst};
use crate::syntax::{conj, disj, Act, ActB, Form, Name, NameSupply, Scope, Tm};

/// Placeholder binder used by the bound base certificates: the body never
/// mentions it, and the frontend reserves it so user input cannot clash.
pub fn placeholder_binder() -> Name {
    Name::global("?")
}

fn match_pairs(sigma: &EqC) -> Vec<(Tm, Tm)> {
    sigma
        .pairs()
        .iter()
        .map(|(x, y)| (Tm::Var(x.clone()), Tm::Var(y.clone())))
        .collect()
}

/// Wrap `f` in a box-match over `sigma`; the empty constraint adds nothing.
pub fn box_match(sigma: &EqC, f: Form) -> Form {
    if sigma.is_empty() {
        f
    } else {
        Form::BoxMatch(match_pairs(sigma), Box::new(f))
    }
}

/// Truth under `sigma`'s equations; the empty constraint would hold in
/// every world, so it degenerates to falsity for use inside disjunctions.
pub fn dia_match(sigma: &EqC) -> Form {
    if sigma.is_empty() {
        Form::False
    } else {
        Form::DiaMatch(match_pairs(sigma), Box::new(Form::True))
    }
}

/// Leading-side free certificate: in every world where `sigma` holds, the
/// action is enabled and the residual satisfies all of `fs`.
pub fn pre(sigma: &EqC, a: &Act, fs: Vec<Form>) -> Form {
    box_match(sigma, Form::Dia(a.clone(), Box::new(conj(fs))))
}

/// Following-side free certificate: after any `a`-step, either one of the
/// collected sibling worlds holds or one of `fs` does.
pub fn post(sigmas: &[EqC], a: &Act, fs: Vec<Form>) -> Form {
    let mut body: Vec<Form> = sigmas.iter().map(dia_match).collect();
    body.extend(fs);
    Form::Box(a.clone(), Box::new(disj(body)))
}

/// Bound analogue of [`pre`], binding the shared follower name.
pub fn pre_b(sigma: &EqC, a: &ActB, x: &Name, fs: Vec<Form>) -> Form {
    box_match(
        sigma,
        Form::DiaB(a.clone(), Box::new(Scope::bind(x, conj(fs)))),
    )
}

/// Bound analogue of [`post`].
pub fn post_b(sigmas: &[EqC], a: &ActB, x: &Name, fs: Vec<Form>) -> Form {
    let mut body: Vec<Form> = sigmas.iter().map(dia_match).collect();
    body.extend(fs);
    Form::BoxB(a.clone(), Box::new(Scope::bind(x, disj(body))))
}

pub fn pre_base(sigma: &EqC, a: &Act) -> Form {
    pre(sigma, a, vec![])
}

pub fn post_base(sigmas: &[EqC], a: &Act) -> Form {
    post(sigmas, a, vec![])
}

pub fn pre_b_base(sigma: &EqC, a: &ActB) -> Form {
    pre_b(sigma, a, &placeholder_binder(), vec![])
}

pub fn post_b_base(sigmas: &[EqC], a: &ActB) -> Form {
    post_b(sigmas, a, &placeholder_binder(), vec![])
}

fn tm_name(t: &Tm) -> &Name {
    match t {
        Tm::Var(n) => n,
        Tm::Bound(_) => unreachable!("step labels never mention unopened binders"),
    }
}

/// Least extension of `constraint` under which two instantiated terms become
/// equal, or `None` when it would violate the context.
fn unify_into(constraint: EqC, pairs: &[(&Tm, &Tm)], ctx: &Ctx) -> Option<EqC> {
    let mut out = constraint;
    for (a, b) in pairs {
        if a != b {
            out.insert_pair(tm_name(a), tm_name(b));
        }
    }
    out.respects(ctx).then_some(out)
}

/// Worlds in which the free logs can perform `a`: each log contributes the
/// least extension of its own constraint unifying its action with `a`,
/// provided that world exists. A log whose action already equals `a` under
/// its substitution contributes its constraint unchanged.
pub fn subs_matching_act(a: &Act, logs: &[&StepLog]) -> Vec<EqC> {
    logs.iter()
        .filter_map(|log| match log {
            StepLog::Free {
                ctx,
                constraint,
                act,
                ..
            } => {
                let world = WorldSubst::of(ctx, constraint);
                let mine = world.apply(a);
                let theirs = world.apply(act);
                match (&mine, &theirs) {
                    (Act::Tau, Act::Tau) => Some(constraint.clone()),
                    (Act::Out(c1, p1), Act::Out(c2, p2)) => {
                        unify_into(constraint.clone(), &[(c1, c2), (p1, p2)], ctx)
                    }
                    _ => None,
                }
            }
            StepLog::Bound { .. } => None,
        })
        .collect()
}

/// Bound-action analogue of [`subs_matching_act`]; only channels compare.
pub fn subs_matching_act_b(a: &ActB, logs: &[&StepLog]) -> Vec<EqC> {
    logs.iter()
        .filter_map(|log| match log {
            StepLog::Bound {
                ctx,
                constraint,
                act,
                ..
            } => {
                let world = WorldSubst::of(ctx, constraint);
                let mine = world.apply(a);
                let theirs = world.apply(act);
                match (&mine, &theirs) {
                    (ActB::In(c1), ActB::In(c2)) | (ActB::Out(c1), ActB::Out(c2)) => {
                        unify_into(constraint.clone(), &[(c1, c2)], ctx)
                    }
                    _ => None,
                }
            }
            StepLog::Free { .. } => None,
        })
        .collect()
}

/// Drop the worlds the leader's own world already validates: matching moves
/// available there are the followers, which the recursive formulae cover.
fn strict_refinements(sigmas: Vec<EqC>, leader: &StepLog) -> Vec<EqC> {
    sigmas
        .into_iter()
        .filter(|s| !s.entailed_by(leader.constraint(), leader.ctx()))
        .collect()
}

fn side_logs(rs: &[StepTree], side: Side) -> Vec<&StepLog> {
    rs.iter()
        .filter(|t| t.side() == side)
        .map(|t| t.log())
        .collect()
}

/// One certificate choice per follower: the cartesian product of the
/// followers' recursive certificate lists (each nonempty), split into left-
/// and right-biased components.
fn follower_combinations(per_follower: &[Vec<(Form, Form)>]) -> Vec<(Vec<Form>, Vec<Form>)> {
    let mut acc = vec![(Vec::new(), Vec::new())];
    for options in per_follower {
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for (ls, rs) in &acc {
            for (l, r) in options {
                let mut ls = ls.clone();
                let mut rs = rs.clone();
                ls.push(l.clone());
                rs.push(r.clone());
                next.push((ls, rs));
            }
        }
        acc = next;
    }
    acc
}

/// The shared binder of a bound leading step, recovered from the context
/// head of the first grandchild's log. Callers guarantee at least one
/// follower with at least one child.
fn shared_binder(first_follower_children: &[StepTree]) -> Name {
    first_follower_children[0].log().ctx().quans()[0]
        .name()
        .clone()
}

/// Transform a bisimulation step forest into distinguishing formula pairs.
///
/// Empty iff the processes behind the forest are openly bisimilar. For each
/// pair, the left process satisfies the first formula and fails the second,
/// and the right process the other way around.
pub fn forest_to_df(supply: &mut NameSupply, rs: &[StepTree]) -> Vec<(Form, Form)> {
    let mut out = Vec::new();

    // Base cases: a leading step with no follower.
    for r in rs {
        if r.side() != Side::Left || !r.children(supply).is_empty() {
            continue;
        }
        if let StepLog::Free {
            constraint, act, ..
        } = r.log()
        {
            let sigmas =
                strict_refinements(subs_matching_act(act, &side_logs(rs, Side::Right)), r.log());
            out.push((
                pre_base(constraint, act),
                box_match(constraint, post_base(&sigmas, act)),
            ));
        }
    }
    for r in rs {
        if r.side() != Side::Right || !r.children(supply).is_empty() {
            continue;
        }
        if let StepLog::Free {
            constraint, act, ..
        } = r.log()
        {
            let sigmas =
                strict_refinements(subs_matching_act(act, &side_logs(rs, Side::Left)), r.log());
            out.push((
                box_match(constraint, post_base(&sigmas, act)),
                pre_base(constraint, act),
            ));
        }
    }
    for r in rs {
        if r.side() != Side::Left || !r.children(supply).is_empty() {
            continue;
        }
        if let StepLog::Bound {
            constraint, act, ..
        } = r.log()
        {
            let sigmas = strict_refinements(
                subs_matching_act_b(act, &side_logs(rs, Side::Right)),
                r.log(),
            );
            out.push((
                pre_b_base(constraint, act),
                box_match(constraint, post_b_base(&sigmas, act)),
            ));
        }
    }
    for r in rs {
        if r.side() != Side::Right || !r.children(supply).is_empty() {
            continue;
        }
        if let StepLog::Bound {
            constraint, act, ..
        } = r.log()
        {
            let sigmas = strict_refinements(
                subs_matching_act_b(act, &side_logs(rs, Side::Left)),
                r.log(),
            );
            out.push((
                box_match(constraint, post_b_base(&sigmas, act)),
                pre_b_base(constraint, act),
            ));
        }
    }

    // Inductive cases: at least one follower, and every follower's residual
    // pair fails recursively; one certificate pair per combination of
    // follower certificates.
    for r in rs {
        if r.side() != Side::Left {
            continue;
        }
        if let StepLog::Free {
            constraint, act, ..
        } = r.log()
        {
            let Some(per_follower) = recurse_followers(supply, r) else {
                continue;
            };
            if per_follower.is_empty() {
                continue;
            }
            let sigmas =
                strict_refinements(subs_matching_act(act, &side_logs(rs, Side::Right)), r.log());
            for (dfs_l, dfs_r) in follower_combinations(&per_follower) {
                out.push((
                    pre(constraint, act, dfs_l),
                    box_match(constraint, post(&sigmas, act, dfs_r)),
                ));
            }
        }
    }
    for r in rs {
        if r.side() != Side::Right {
            continue;
        }
        if let StepLog::Free {
            constraint, act, ..
        } = r.log()
        {
            let Some(per_follower) = recurse_followers(supply, r) else {
                continue;
            };
            if per_follower.is_empty() {
                continue;
            }
            let sigmas =
                strict_refinements(subs_matching_act(act, &side_logs(rs, Side::Left)), r.log());
            for (dfs_l, dfs_r) in follower_combinations(&per_follower) {
                out.push((
                    box_match(constraint, post(&sigmas, act, dfs_l)),
                    pre(constraint, act, dfs_r),
                ));
            }
        }
    }
    for r in rs {
        if r.side() != Side::Left {
            continue;
        }
        if let StepLog::Bound {
            constraint, act, ..
        } = r.log()
        {
            let Some(per_follower) = recurse_followers(supply, r) else {
                continue;
            };
            if per_follower.is_empty() {
                continue;
            }
            // Safe: the first follower's certificate list is nonempty, so
            // its child forest is too.
            let x = shared_binder(r.children(supply)[0].children(supply));
            let sigmas = strict_refinements(
                subs_matching_act_b(act, &side_logs(rs, Side::Right)),
                r.log(),
            );
            for (dfs_l, dfs_r) in follower_combinations(&per_follower) {
                out.push((
                    pre_b(constraint, act, &x, dfs_l),
                    box_match(constraint, post_b(&sigmas, act, &x, dfs_r)),
                ));
            }
        }
    }
    for r in rs {
        if r.side() != Side::Right {
            continue;
        }
        if let StepLog::Bound {
            constraint, act, ..
        } = r.log()
        {
            let Some(per_follower) = recurse_followers(supply, r) else {
                continue;
            };
            if per_follower.is_empty() {
                continue;
            }
            let x = shared_binder(r.children(supply)[0].children(supply));
            let sigmas = strict_refinements(
                subs_matching_act_b(act, &side_logs(rs, Side::Left)),
                r.log(),
            );
            for (dfs_l, dfs_r) in follower_combinations(&per_follower) {
                out.push((
                    box_match(constraint, post_b(&sigmas, act, &x, dfs_l)),
                    pre_b(constraint, act, &x, dfs_r),
                ));
            }
        }
    }

    out
}

/// Solve every follower's residual pair, bailing out at the first follower
/// whose forest admits no certificate (the residuals are bisimilar, so this
/// leading step cannot distinguish and deeper siblings need not expand).
fn recurse_followers(supply: &mut NameSupply, leader: &StepTree) -> Option<Vec<Vec<(Form, Form)>>> {
    let follower_count = leader.children(supply).len();
    let mut out = Vec::with_capacity(follower_count);
    for i in 0..follower_count {
        let next = leader.children(supply)[i].children(supply);
        let dfs = forest_to_df(supply, next);
        if dfs.is_empty() {
            return None;
        }
        out.push(dfs);
    }
    Some(out)
}
