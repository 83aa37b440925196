//! Open simulation and bisimulation checking.
//!
//! The game pairs a symbolic leading step (the challenger picks a world
//! refinement) with fixed-world following steps of the opponent, taken after
//! applying the world's substitution. Boolean checkers short-circuit; the
//! forest variants record every step as a rose tree whose children are
//! produced on demand, which is what the distinguishing-formula generator
//! consumes.

use std::cell::{Cell, OnceCell};

use crate::id_lts;
use crate::open_lts::{self, Ctx, EqC, WorldSubst};
use crate::syntax::{free_names_ordered, Act, ActB, Name, NameSupply, Pr, PrB};

/// Record of one step taken during the game.
///
/// Leading steps store the constraint that enabled them and the residual
/// with the world's substitution already applied; a following step reuses
/// its leader's constraint since the follower moves inside the leader's
/// world.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepLog {
    Free {
        ctx: Ctx,
        constraint: EqC,
        act: Act,
        residual: Pr,
    },
    Bound {
        ctx: Ctx,
        constraint: EqC,
        act: ActB,
        residual: PrB,
    },
}

impl StepLog {
    pub fn ctx(&self) -> &Ctx {
        match self {
            StepLog::Free { ctx, .. } | StepLog::Bound { ctx, .. } => ctx,
        }
    }

    pub fn constraint(&self) -> &EqC {
        match self {
            StepLog::Free { constraint, .. } | StepLog::Bound { constraint, .. } => constraint,
        }
    }
}

/// Which process took the step: `Left` for the first argument of the
/// checker, `Right` for the second.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

type ChildThunk = Box<dyn FnOnce(&mut NameSupply) -> Vec<StepTree>>;

/// A node of the bisimulation step forest. Children alternate sides along
/// every path and are expanded lazily, memoized on first access.
pub struct StepTree {
    side: Side,
    log: StepLog,
    thunk: Cell<Option<ChildThunk>>,
    forced: OnceCell<Vec<StepTree>>,
}

impl StepTree {
    fn new(side: Side, log: StepLog, thunk: ChildThunk) -> StepTree {
        StepTree {
            side,
            log,
            thunk: Cell::new(Some(thunk)),
            forced: OnceCell::new(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn log(&self) -> &StepLog {
        &self.log
    }

    /// The follow-up nodes, expanding them on first call.
    pub fn children(&self, supply: &mut NameSupply) -> &[StepTree] {
        if self.forced.get().is_none() {
            let thunk = self.thunk.take().expect("step tree thunk already taken");
            let kids = thunk(supply);
            let _ = self.forced.set(kids);
        }
        self.forced.get().unwrap()
    }

    /// Whether the children have been produced yet.
    pub fn is_expanded(&self) -> bool {
        self.forced.get().is_some()
    }
}

impl std::fmt::Debug for StepTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StepTree")
            .field("side", &self.side)
            .field("log", &self.log)
            .field("forced", &self.forced.get().map(|v| v.len()))
            .finish()
    }
}

/// Fully expanded tree, for rendering and tests.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EagerTree {
    pub side: Side,
    pub log: StepLog,
    pub children: Vec<EagerTree>,
}

pub fn force_tree(t: &StepTree, supply: &mut NameSupply) -> EagerTree {
    EagerTree {
        side: t.side,
        log: t.log.clone(),
        children: t
            .children(supply)
            .iter()
            .map(|c| force_tree(c, supply))
            .collect(),
    }
}

pub fn force_forest(f: &[StepTree], supply: &mut NameSupply) -> Vec<EagerTree> {
    f.iter().map(|t| force_tree(t, supply)).collect()
}

/// The all-universal context over the free names of `p` and `q`, earlier
/// occurrences older.
pub fn top_context(p: &Pr, q: &Pr) -> Ctx {
    Ctx::forall(free_names_ordered(&(p.clone(), q.clone())))
}

fn observe_inputs(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) {
    for quan in ctx.quans() {
        supply.observe(quan.name());
    }
    supply.observe_value(p);
    supply.observe_value(q);
}

/// Fresh name for opening a pair of bound residuals, derived from the
/// leading binder's hint. Computed once per leading step so every follower
/// shares it.
fn fresh_binder(supply: &mut NameSupply, scope: &PrB) -> Name {
    supply.observe_value(scope);
    supply.fresh(scope.hint())
}

fn extend_for(act: &ActB, ctx: &Ctx, x: &Name) -> Ctx {
    match act {
        // An input name may later be unified with anything: universal.
        ActB::In(_) => ctx.extend_all(x.clone()),
        // An extruded name is fresh for everything older: nabla.
        ActB::Out(_) => ctx.extend_nabla(x.clone()),
    }
}

/// True iff `q` openly simulates `p` under `ctx`.
pub fn sim(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> bool {
    observe_inputs(supply, ctx, p, q);
    sim_rec(supply, ctx, p, q)
}

fn sim_rec(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> bool {
    leads_followed_free(supply, ctx, p, q, &mut sim_rec)
        && leads_followed_bound(supply, ctx, p, q, &mut sim_rec)
}

/// True iff `p` and `q` are openly bisimilar under `ctx`.
pub fn bisim(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> bool {
    observe_inputs(supply, ctx, p, q);
    bisim_rec(supply, ctx, p, q)
}

fn bisim_rec(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> bool {
    leads_followed_free(supply, ctx, p, q, &mut bisim_rec)
        && leads_followed_bound(supply, ctx, p, q, &mut bisim_rec)
        && leads_followed_free(supply, ctx, q, p, &mut |s, c, b, a| bisim_rec(s, c, a, b))
        && leads_followed_bound(supply, ctx, q, p, &mut |s, c, b, a| bisim_rec(s, c, a, b))
}

/// Every symbolic free step of the leader has a matching fixed-world step of
/// the follower whose residual pair passes `rec`.
///
/// `rec` is called as `rec(supply, ctx, leader_residual, follower_residual)`.
fn leads_followed_free(
    supply: &mut NameSupply,
    ctx: &Ctx,
    leader: &Pr,
    follower: &Pr,
    rec: &mut dyn FnMut(&mut NameSupply, &Ctx, &Pr, &Pr) -> bool,
) -> bool {
    for (sigma, r) in open_lts::one(supply, ctx, leader) {
        let world = WorldSubst::of(ctx, &sigma);
        let (lead_act, lead_res) = world.apply(&r);
        let follower_w = world.apply(follower);
        let followed = id_lts::one(supply, &follower_w)
            .into_iter()
            .any(|(act, res)| act == lead_act && rec(supply, ctx, &lead_res, &res));
        if !followed {
            return false;
        }
    }
    true
}

/// Bound-step analogue: both residual binders are opened with one shared
/// fresh name and the context grows by it.
fn leads_followed_bound(
    supply: &mut NameSupply,
    ctx: &Ctx,
    leader: &Pr,
    follower: &Pr,
    rec: &mut dyn FnMut(&mut NameSupply, &Ctx, &Pr, &Pr) -> bool,
) -> bool {
    for (sigma, r) in open_lts::one_b(supply, ctx, leader) {
        let world = WorldSubst::of(ctx, &sigma);
        let (lead_act, lead_scope): (ActB, PrB) = world.apply(&r);
        let follower_w = world.apply(follower);
        let x = fresh_binder(supply, &lead_scope);
        let lead_res = lead_scope.open_with(&x);
        let inner_ctx = extend_for(&lead_act, ctx, &x);
        let followed = id_lts::one_b(supply, &follower_w)
            .into_iter()
            .any(|(act, scope)| {
                act == lead_act && {
                    let res = scope.open_with(&x);
                    rec(supply, &inner_ctx, &lead_res, &res)
                }
            });
        if !followed {
            return false;
        }
    }
    true
}

/// Forest of all simulation steps with `p` leading.
pub fn sim_forest(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> Vec<StepTree> {
    observe_inputs(supply, ctx, p, q);
    sim_forest_rec(supply, ctx, p, q)
}

fn sim_forest_rec(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> Vec<StepTree> {
    let mut out = lead_trees_free(supply, ctx, p, q, Side::Left, sim_forest_rec);
    out.extend(lead_trees_bound(
        supply,
        ctx,
        p,
        q,
        Side::Left,
        sim_forest_rec,
    ));
    out
}

/// Forest of all bisimulation steps: groups ordered left-free, left-bound,
/// right-free, right-bound.
pub fn bisim_forest(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> Vec<StepTree> {
    observe_inputs(supply, ctx, p, q);
    bisim_forest_rec(supply, ctx, p, q)
}

fn bisim_forest_rec(supply: &mut NameSupply, ctx: &Ctx, p: &Pr, q: &Pr) -> Vec<StepTree> {
    let mut out = lead_trees_free(supply, ctx, p, q, Side::Left, bisim_forest_rec);
    out.extend(lead_trees_bound(
        supply,
        ctx,
        p,
        q,
        Side::Left,
        bisim_forest_rec,
    ));
    out.extend(lead_trees_free(
        supply,
        ctx,
        q,
        p,
        Side::Right,
        |s, c, b, a| bisim_forest_rec(s, c, a, b),
    ));
    out.extend(lead_trees_bound(
        supply,
        ctx,
        q,
        p,
        Side::Right,
        |s, c, b, a| bisim_forest_rec(s, c, a, b),
    ));
    out
}

/// One tree per symbolic free step of the leader; children are the
/// follower's matching fixed-world steps, whose own children recurse.
///
/// `rec` is called as `rec(supply, ctx, leader_residual, follower_residual)`.
fn lead_trees_free(
    supply: &mut NameSupply,
    ctx: &Ctx,
    leader: &Pr,
    follower: &Pr,
    side: Side,
    rec: impl Fn(&mut NameSupply, &Ctx, &Pr, &Pr) -> Vec<StepTree> + Clone + 'static,
) -> Vec<StepTree> {
    let mut out = Vec::new();
    for (sigma, r) in open_lts::one(supply, ctx, leader) {
        let world = WorldSubst::of(ctx, &sigma);
        let (lead_act, lead_res) = world.apply(&r);
        let follower_w = world.apply(follower);
        let log = StepLog::Free {
            ctx: ctx.clone(),
            constraint: sigma.clone(),
            act: lead_act.clone(),
            residual: lead_res.clone(),
        };
        let ctx = ctx.clone();
        let rec = rec.clone();
        let thunk: ChildThunk = Box::new(move |s| {
            let mut kids = Vec::new();
            for (act, res) in id_lts::one(s, &follower_w) {
                if act != lead_act {
                    continue;
                }
                let log = StepLog::Free {
                    ctx: ctx.clone(),
                    constraint: sigma.clone(),
                    act,
                    residual: res.clone(),
                };
                let ctx = ctx.clone();
                let lead_res = lead_res.clone();
                let rec = rec.clone();
                let grand: ChildThunk = Box::new(move |s| rec(s, &ctx, &lead_res, &res));
                kids.push(StepTree::new(side.flipped(), log, grand));
            }
            kids
        });
        out.push(StepTree::new(side, log, thunk));
    }
    out
}

/// Bound-step trees. The shared fresh binder is chosen before the followers
/// are enumerated so all children of one leading step agree on it.
fn lead_trees_bound(
    supply: &mut NameSupply,
    ctx: &Ctx,
    leader: &Pr,
    follower: &Pr,
    side: Side,
    rec: impl Fn(&mut NameSupply, &Ctx, &Pr, &Pr) -> Vec<StepTree> + Clone + 'static,
) -> Vec<StepTree> {
    let mut out = Vec::new();
    for (sigma, r) in open_lts::one_b(supply, ctx, leader) {
        let world = WorldSubst::of(ctx, &sigma);
        let (lead_act, lead_scope): (ActB, PrB) = world.apply(&r);
        let follower_w = world.apply(follower);
        let x = fresh_binder(supply, &lead_scope);
        let inner_ctx = extend_for(&lead_act, ctx, &x);
        let lead_res = lead_scope.open_with(&x);
        let log = StepLog::Bound {
            ctx: ctx.clone(),
            constraint: sigma.clone(),
            act: lead_act.clone(),
            residual: lead_scope.clone(),
        };
        let ctx = ctx.clone();
        let rec = rec.clone();
        let thunk: ChildThunk = Box::new(move |s| {
            let mut kids = Vec::new();
            for (act, scope) in id_lts::one_b(s, &follower_w) {
                if act != lead_act {
                    continue;
                }
                let log = StepLog::Bound {
                    ctx: ctx.clone(),
                    constraint: sigma.clone(),
                    act,
                    residual: scope.clone(),
                };
                let res = scope.open_with(&x);
                let inner_ctx = inner_ctx.clone();
                let lead_res = lead_res.clone();
                let rec = rec.clone();
                let grand: ChildThunk = Box::new(move |s| rec(s, &inner_ctx, &lead_res, &res));
                kids.push(StepTree::new(side.flipped(), log, grand));
            }
            kids
        });
        out.push(StepTree::new(side, log, thunk));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Name, Scope, Tm};

    fn nm(s: &str) -> Name {
        Name::global(s)
    }
    fn v(s: &str) -> Tm {
        Tm::var(s)
    }
    fn tau(p: Pr) -> Pr {
        Pr::Tau(Box::new(p))
    }
    fn plus(p: Pr, q: Pr) -> Pr {
        Pr::Plus(Box::new(p), Box::new(q))
    }
    fn mtch(x: &str, y: &str, p: Pr) -> Pr {
        Pr::Match(v(x), v(y), Box::new(p))
    }

    /// tau.(tau.0) + tau.0
    fn fig_p() -> Pr {
        plus(tau(tau(Pr::Null)), tau(Pr::Null))
    }

    /// [x=y](tau.tau.0) + tau.0
    fn fig_q() -> Pr {
        plus(mtch("x", "y", tau(tau(Pr::Null))), tau(Pr::Null))
    }

    fn ctx_xy() -> Ctx {
        Ctx::forall([nm("x"), nm("y")])
    }

    #[test]
    fn sim_examples() {
        let mut s = NameSupply::new();
        // tau.0 is simulated by tau.0 + tau.tau.0
        assert!(sim(
            &mut s,
            &Ctx::empty(),
            &tau(Pr::Null),
            &plus(tau(Pr::Null), tau(tau(Pr::Null)))
        ));
        // vacuous simulation
        assert!(sim(&mut s, &Ctx::empty(), &Pr::Null, &Pr::Null));
        // tau.([x=y]tau.0) is not simulated by tau.0: the (x,y) world
        // demands a second tau.
        assert!(!sim(
            &mut s,
            &ctx_xy(),
            &tau(mtch("x", "y", tau(Pr::Null))),
            &tau(Pr::Null)
        ));
    }

    #[test]
    fn mutual_simulation_is_weaker_than_bisimulation() {
        // tau.tau.0 and tau.tau.0 + tau.0 simulate each other, but after the
        // right side leads tau to 0 the roles realternate and the left
        // residual tau.0 cannot be answered.
        let mut s = NameSupply::new();
        let p = tau(tau(Pr::Null));
        let q = plus(tau(tau(Pr::Null)), tau(Pr::Null));
        assert!(sim(&mut s, &Ctx::empty(), &p, &q));
        assert!(sim(&mut s, &Ctx::empty(), &q, &p));
        assert!(!bisim(&mut s, &Ctx::empty(), &p, &q));
    }

    #[test]
    fn sim_forest_matches_the_two_left_led_trees() {
        // Restricted to left leads, the forest has exactly the two trees:
        // one whose follower fails one level down, one that closes.
        let mut s = NameSupply::new();
        let (p, q) = (fig_p(), fig_q());
        let forest = sim_forest(&mut s, &ctx_xy(), &p, &q);
        assert_eq!(forest.len(), 2);
        assert!(forest.iter().all(|t| t.side() == Side::Left));

        let deeper = forest[0].children(&mut s);
        assert_eq!(deeper.len(), 1);
        let grand = deeper[0].children(&mut s);
        assert_eq!(grand.len(), 1);
        assert!(grand[0].children(&mut s).is_empty());

        let closes = forest[1].children(&mut s);
        assert_eq!(closes.len(), 1);
        assert!(closes[0].children(&mut s).is_empty());
    }

    #[test]
    fn bisim_distinguishes_match_from_choice() {
        let mut s = NameSupply::new();
        assert!(!bisim(&mut s, &ctx_xy(), &fig_p(), &fig_q()));
        // tau.([x=y]tau.0) vs tau.0 + tau.tau.0
        assert!(!bisim(
            &mut s,
            &ctx_xy(),
            &tau(mtch("x", "y", tau(Pr::Null))),
            &plus(tau(Pr::Null), tau(tau(Pr::Null)))
        ));
    }

    #[test]
    fn bisim_is_reflexive_on_samples() {
        let mut s = NameSupply::new();
        for p in [
            Pr::Null,
            fig_p(),
            fig_q(),
            Pr::Nu(Box::new(Scope::bind(
                &nm("n"),
                Pr::Out(v("y"), v("n"), Box::new(Pr::Null)),
            ))),
        ] {
            let ctx = top_context(&p, &p);
            assert!(bisim(&mut s, &ctx, &p, &p), "not reflexive on {p:?}");
        }
    }

    #[test]
    fn forest_of_figure_example_has_four_root_groups() {
        let mut s = NameSupply::new();
        let (p, q) = (fig_p(), fig_q());
        let ctx = top_context(&p, &q);
        assert_eq!(ctx, ctx_xy());
        let forest = bisim_forest(&mut s, &ctx, &p, &q);
        // P leads two tau steps; Q leads two (one needs the (x,y) world).
        assert_eq!(forest.len(), 4);
        let sides: Vec<Side> = forest.iter().map(|t| t.side()).collect();
        assert_eq!(
            sides,
            vec![Side::Left, Side::Left, Side::Right, Side::Right]
        );

        // Tree (1): leader tau to tau.0, one follower tau to 0, then a
        // leader tau to 0 with no follower.
        let t1 = &forest[0];
        match t1.log() {
            StepLog::Free {
                constraint,
                act,
                residual,
                ..
            } => {
                assert!(constraint.is_empty());
                assert_eq!(*act, Act::Tau);
                assert_eq!(*residual, tau(Pr::Null));
            }
            other => panic!("unexpected root log {other:?}"),
        }
        let followers = t1.children(&mut s);
        assert_eq!(followers.len(), 1);
        assert_eq!(followers[0].side(), Side::Right);
        let grand = followers[0].children(&mut s);
        assert_eq!(grand.len(), 1);
        assert!(
            grand[0].children(&mut s).is_empty(),
            "leader tau to 0 unmatched"
        );

        // Tree (3): the Q-led group's first root carries sigma = [(x,y)].
        let t3 = &forest[2];
        match t3.log() {
            StepLog::Free {
                constraint, act, ..
            } => {
                assert_eq!(
                    *constraint,
                    EqC::from_pairs([(nm("x"), nm("y"))]),
                    "match branch leads in the unified world"
                );
                assert_eq!(*act, Act::Tau);
            }
            other => panic!("unexpected root log {other:?}"),
        }
    }

    #[test]
    fn forest_sides_alternate_and_followers_share_leader_constraint() {
        let mut s = NameSupply::new();
        let (p, q) = (fig_p(), fig_q());
        let ctx = top_context(&p, &q);
        let forest = bisim_forest(&mut s, &ctx, &p, &q);
        // Every leader node's followers take the opposite side and move in
        // the leader's world; a follower's children open the next round.
        fn walk_leader(t: &StepTree, s: &mut NameSupply) {
            let sigma = t.log().constraint().clone();
            let side = t.side();
            for follower in t.children(s) {
                assert_eq!(follower.side(), side.flipped(), "follower side must flip");
                assert_eq!(
                    *follower.log().constraint(),
                    sigma,
                    "follower moves in the leader's world"
                );
                for next_leader in follower.children(s) {
                    walk_leader(next_leader, s);
                }
            }
        }
        for t in &forest {
            walk_leader(t, &mut s);
        }
    }

    #[test]
    fn empty_forest_for_null_processes() {
        let mut s = NameSupply::new();
        assert!(sim_forest(&mut s, &Ctx::empty(), &Pr::Null, &fig_p()).is_empty());
        assert!(bisim_forest(&mut s, &Ctx::empty(), &Pr::Null, &Pr::Null).is_empty());
    }

    #[test]
    fn children_expand_on_demand() {
        let mut s = NameSupply::new();
        let (p, q) = (fig_p(), fig_q());
        let ctx = top_context(&p, &q);
        let forest = bisim_forest(&mut s, &ctx, &p, &q);
        assert!(forest.iter().all(|t| !t.is_expanded()));
        let kids = forest[0].children(&mut s);
        assert!(kids.iter().all(|t| !t.is_expanded()));
        assert!(forest[0].is_expanded());
        assert!(!forest[1].is_expanded());
    }
}
