//! Rendering back to concrete syntax.
//!
//! Free names print as their base (index 0) or base plus index. Binders are
//! display hints only: a binder is shown under the first decoration of its
//! hint that avoids every free name of the body, so printing and reparsing
//! yields an alpha-equivalent value.

use crate::bisim::{Side, StepLog, StepTree};
use crate::open_lts::{Ctx, EqC, Quan};
use crate::syntax::{free_names, Act, ActB, Form, Name, NameSupply, Pr, Scope, Syntax, Tm};

pub fn pp_name(n: &Name) -> String {
    n.to_string()
}

pub fn pp_tm(t: &Tm) -> String {
    match t {
        Tm::Var(n) => pp_name(n),
        Tm::Bound(k) => format!("#{k}"),
    }
}

/// Pick a display name for a scope's binder and open the body with it.
fn display_binder<T: Syntax>(scope: &Scope<T>) -> (String, T) {
    let taken: std::collections::BTreeSet<String> = free_names(scope).iter().map(pp_name).collect();
    let hint = scope.hint();
    let mut candidate = hint.to_string();
    let mut i = 1u32;
    while taken.contains(&candidate) {
        candidate = format!("{hint}{i}");
        i += 1;
    }
    let body = scope.open_with(&Name::global(candidate.clone()));
    (candidate, body)
}

// Precedence levels: sum 0, par 1, prefix 2.
fn pr_level(p: &Pr) -> u8 {
    match p {
        Pr::Plus(_, _) => 0,
        Pr::Par(_, _) => 1,
        _ => 2,
    }
}

fn pp_pr_at(p: &Pr, min_level: u8, out: &mut String) {
    if pr_level(p) < min_level {
        out.push('(');
        pp_pr_at(p, 0, out);
        out.push(')');
        return;
    }
    match p {
        Pr::Null => out.push('0'),
        Pr::Tau(cont) => {
            out.push_str("tau.");
            pp_pr_at(cont, 2, out);
        }
        Pr::Out(x, y, cont) => {
            out.push_str(&pp_tm(x));
            out.push('!');
            out.push_str(&pp_tm(y));
            out.push('.');
            pp_pr_at(cont, 2, out);
        }
        Pr::In(x, scope) => {
            let (binder, body) = display_binder(scope);
            out.push_str(&pp_tm(x));
            out.push_str("?(");
            out.push_str(&binder);
            out.push_str(").");
            pp_pr_at(&body, 2, out);
        }
        Pr::Match(x, y, cont) => {
            out.push('[');
            out.push_str(&pp_tm(x));
            out.push('=');
            out.push_str(&pp_tm(y));
            out.push(']');
            pp_pr_at(cont, 2, out);
        }
        Pr::Plus(l, r) => {
            pp_pr_at(l, 0, out);
            out.push_str(" + ");
            pp_pr_at(r, 1, out);
        }
        Pr::Par(l, r) => {
            pp_pr_at(l, 1, out);
            out.push_str(" | ");
            pp_pr_at(r, 2, out);
        }
        Pr::Nu(scope) => {
            let (binder, body) = display_binder(scope);
            out.push_str("nu(");
            out.push_str(&binder);
            out.push(')');
            pp_pr_at(&body, 2, out);
        }
    }
}

pub fn pp_process(p: &Pr) -> String {
    let mut out = String::new();
    pp_pr_at(p, 0, &mut out);
    out
}

pub fn pp_act(a: &Act) -> String {
    match a {
        Act::Tau => "tau".into(),
        Act::Out(x, y) => format!("{}!{}", pp_tm(x), pp_tm(y)),
    }
}

fn pp_eqs(eqs: &[(Tm, Tm)]) -> String {
    eqs.iter()
        .map(|(a, b)| format!("{}={}", pp_tm(a), pp_tm(b)))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn pp_formula(f: &Form) -> String {
    let mut out = String::new();
    pp_form(f, &mut out);
    out
}

fn pp_form(f: &Form, out: &mut String) {
    match f {
        Form::False => out.push_str("ff"),
        Form::True => out.push_str("tt"),
        Form::Conj(fs) | Form::Disj(fs) => {
            out.push_str(if matches!(f, Form::Conj(_)) {
                "and["
            } else {
                "or["
            });
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                pp_form(g, out);
            }
            out.push(']');
        }
        Form::Dia(a, g) => {
            out.push('<');
            out.push_str(&pp_act(a));
            out.push('>');
            pp_form(g, out);
        }
        Form::Box(a, g) => {
            out.push('[');
            out.push_str(&pp_act(a));
            out.push(']');
            pp_form(g, out);
        }
        Form::DiaB(a, scope) | Form::BoxB(a, scope) => {
            let diamond = matches!(f, Form::DiaB(_, _));
            let (binder, body) = display_binder(scope);
            let (chan, marker) = match a {
                ActB::Out(x) => (pp_tm(x), '!'),
                ActB::In(x) => (pp_tm(x), '?'),
            };
            out.push(if diamond { '<' } else { '[' });
            out.push_str(&chan);
            out.push(marker);
            out.push('(');
            out.push_str(&binder);
            out.push(')');
            out.push(if diamond { '>' } else { ']' });
            pp_form(&body, out);
        }
        Form::DiaMatch(eqs, g) => {
            out.push('<');
            out.push_str(&pp_eqs(eqs));
            out.push('>');
            pp_form(g, out);
        }
        Form::BoxMatch(eqs, g) => {
            out.push('[');
            out.push_str(&pp_eqs(eqs));
            out.push(']');
            pp_form(g, out);
        }
    }
}

pub fn pp_eqc(sigma: &EqC) -> String {
    let pairs: Vec<String> = sigma
        .pairs()
        .iter()
        .map(|(x, y)| format!("({},{})", pp_name(x), pp_name(y)))
        .collect();
    format!("[{}]", pairs.join(","))
}

pub fn pp_ctx(ctx: &Ctx) -> String {
    let quans: Vec<String> = ctx
        .quans()
        .iter()
        .map(|q| match q {
            Quan::All(n) => format!("all {}", pp_name(n)),
            Quan::Nabla(n) => format!("nab {}", pp_name(n)),
        })
        .collect();
    format!("[{}]", quans.join(", "))
}

/// One line of `steps` output in a fixed world: `(act, residual)`.
pub fn pp_free_step(act: &Act, residual: &Pr) -> String {
    format!("({}, {})", pp_act(act), pp_process(residual))
}

/// Bound step: the binder is displayed inside the action.
pub fn pp_bound_step(act: &ActB, residual: &Scope<Pr>) -> String {
    let (binder, body) = display_binder(residual);
    let (chan, marker) = match act {
        ActB::Out(x) => (pp_tm(x), '!'),
        ActB::In(x) => (pp_tm(x), '?'),
    };
    format!("({chan}{marker}({binder}), {})", pp_process(&body))
}

/// Symbolic variants carry the enabling constraint up front.
pub fn pp_free_step_sym(sigma: &EqC, act: &Act, residual: &Pr) -> String {
    format!(
        "({}, {}, {})",
        pp_eqc(sigma),
        pp_act(act),
        pp_process(residual)
    )
}

pub fn pp_bound_step_sym(sigma: &EqC, act: &ActB, residual: &Scope<Pr>) -> String {
    let (binder, body) = display_binder(residual);
    let (chan, marker) = match act {
        ActB::Out(x) => (pp_tm(x), '!'),
        ActB::In(x) => (pp_tm(x), '?'),
    };
    format!(
        "({}, {chan}{marker}({binder}), {})",
        pp_eqc(sigma),
        pp_process(&body)
    )
}

fn pp_log(log: &StepLog) -> String {
    match log {
        StepLog::Free {
            constraint,
            act,
            residual,
            ..
        } => format!(
            "{} {} -> {}",
            pp_eqc(constraint),
            pp_act(act),
            pp_process(residual)
        ),
        StepLog::Bound {
            constraint,
            act,
            residual,
            ..
        } => {
            let (binder, body) = display_binder(residual);
            let (chan, marker) = match act {
                ActB::Out(x) => (pp_tm(x), '!'),
                ActB::In(x) => (pp_tm(x), '?'),
            };
            format!(
                "{} {chan}{marker}({binder}) -> {}",
                pp_eqc(constraint),
                pp_process(&body)
            )
        }
    }
}

/// Indented text rendering of a step forest. Leading steps print as `p>` or
/// `q>`, following steps as `p~` or `q~`. `max_depth` bounds expansion;
/// suppressed subtrees print an ellipsis marker.
pub fn render_forest(
    supply: &mut NameSupply,
    forest: &[StepTree],
    max_depth: Option<usize>,
) -> String {
    let mut out = String::new();
    for tree in forest {
        render_tree(supply, tree, 0, max_depth, &mut out);
    }
    out
}

fn render_tree(
    supply: &mut NameSupply,
    tree: &StepTree,
    depth: usize,
    max_depth: Option<usize>,
    out: &mut String,
) {
    let indent = "  ".repeat(depth);
    let who = match tree.side() {
        Side::Left => 'p',
        Side::Right => 'q',
    };
    let role = if depth.is_multiple_of(2) { '>' } else { '~' };
    out.push_str(&format!("{indent}{who}{role} {}\n", pp_log(tree.log())));
    if let Some(limit) = max_depth {
        if depth + 1 >= limit {
            if !tree.children(supply).is_empty() {
                out.push_str(&format!("{indent}  ...\n"));
            }
            return;
        }
    }
    for child in tree.children(supply) {
        render_tree(supply, child, depth + 1, max_depth, out);
    }
}
