//! One-step labeled transition semantics in a fixed world: the next steps a
//! process can take with its names interpreted as they stand (identity
//! substitution).
//!
//! Emission order is structural: left frame, right frame, close (both
//! orientations), then interaction (both orientations), so transcripts are
//! reproducible.

use crate::syntax::{substitute, unbind2, Act, ActB, Name, NameSupply, Pr, PrB, Scope, Tm};

/// All free steps of `p`: tau and free-output transitions.
pub fn one(supply: &mut NameSupply, p: &Pr) -> Vec<(Act, Pr)> {
    let mut out = Vec::new();
    match p {
        Pr::Out(x, y, cont) => out.push((Act::Out(x.clone(), y.clone()), (**cont).clone())),
        Pr::Tau(cont) => out.push((Act::Tau, (**cont).clone())),
        Pr::Match(x, y, cont) => {
            if x == y {
                out.extend(one(supply, cont));
            }
        }
        Pr::Plus(p, q) => {
            out.extend(one(supply, p));
            out.extend(one(supply, q));
        }
        Pr::Par(p, q) => {
            for (l, p1) in one(supply, p) {
                out.push((l, Pr::Par(Box::new(p1), q.clone())));
            }
            for (l, q1) in one(supply, q) {
                out.push((l, Pr::Par(p.clone(), Box::new(q1))));
            }
            // close: bound output meets bound input on a common channel
            let bp = one_b(supply, p);
            let bq = one_b(supply, q);
            for (lp, sp) in &bp {
                for (lq, sq) in &bq {
                    let matched = match (lp, lq) {
                        (ActB::Out(x), ActB::In(x2)) | (ActB::In(x2), ActB::Out(x)) => x == x2,
                        _ => false,
                    };
                    if matched {
                        let (y, p1, q1) = unbind2(sp, sq, supply);
                        let body = Pr::Par(Box::new(p1), Box::new(q1));
                        out.push((Act::Tau, Pr::Nu(Box::new(Scope::bind(&y, body)))));
                    }
                }
            }
            // interaction: free output meets bound input
            for (lp, p1) in one(supply, p) {
                if let Act::Out(x, v) = &lp {
                    for (lq, sq) in &bq {
                        if let ActB::In(x2) = lq {
                            if x == x2 {
                                let (y, q1) = sq.unbind(supply);
                                let q1 = substitute(&q1, &y, v);
                                out.push((Act::Tau, Pr::Par(Box::new(p1.clone()), Box::new(q1))));
                            }
                        }
                    }
                }
            }
            for (lp, sp) in &bp {
                if let ActB::In(x2) = lp {
                    for (lq, q1) in one(supply, q) {
                        if let Act::Out(x, v) = &lq {
                            if x == x2 {
                                let (y, p1) = sp.unbind(supply);
                                let p1 = substitute(&p1, &y, v);
                                out.push((Act::Tau, Pr::Par(Box::new(p1), Box::new(q1.clone()))));
                            }
                        }
                    }
                }
            }
        }
        Pr::Nu(b) => {
            let (x, inner) = b.unbind(supply);
            for (l, p1) in one(supply, &inner) {
                let mentions_x = match &l {
                    Act::Out(Tm::Var(ch), Tm::Var(pay)) => *ch == x || *pay == x,
                    _ => false,
                };
                if !mentions_x {
                    out.push((l, Pr::Nu(Box::new(Scope::bind(&x, p1)))));
                }
            }
        }
        Pr::Null | Pr::In(_, _) => {}
    }
    out
}

/// All bound steps of `p`: input and bound-output (scope extrusion)
/// transitions, residuals abstracted over the transmitted name.
pub fn one_b(supply: &mut NameSupply, p: &Pr) -> Vec<(ActB, PrB)> {
    let mut out = Vec::new();
    match p {
        Pr::In(x, b) => out.push((ActB::In(x.clone()), (**b).clone())),
        Pr::Match(x, y, cont) => {
            if x == y {
                out.extend(one_b(supply, cont));
            }
        }
        Pr::Plus(p, q) => {
            out.extend(one_b(supply, p));
            out.extend(one_b(supply, q));
        }
        Pr::Par(p, q) => {
            for (l, (x, p1)) in one_b_open(supply, p) {
                let body = Pr::Par(Box::new(p1), q.clone());
                out.push((l, Scope::bind(&x, body)));
            }
            for (l, (x, q1)) in one_b_open(supply, q) {
                let body = Pr::Par(p.clone(), Box::new(q1));
                out.push((l, Scope::bind(&x, body)));
            }
        }
        Pr::Nu(b) => {
            let (x, inner) = b.unbind(supply);
            for (l, (y, p1)) in one_b_open(supply, &inner) {
                let mentions_x = match &l {
                    ActB::Out(Tm::Var(ch)) | ActB::In(Tm::Var(ch)) => *ch == x,
                    _ => false,
                };
                if !mentions_x {
                    let rewrapped = Pr::Nu(Box::new(Scope::bind(&x, p1)));
                    out.push((l, Scope::bind(&y, rewrapped)));
                }
            }
            // open scope extrusion: the restricted name escapes as a bound
            // output over a public channel
            for (l, p1) in one(supply, &inner) {
                if let Act::Out(ch, Tm::Var(pay)) = &l {
                    if *pay == x && *ch != Tm::Var(x.clone()) {
                        out.push((ActB::Out(ch.clone()), Scope::bind(&x, p1)));
                    }
                }
            }
        }
        Pr::Null | Pr::Tau(_) | Pr::Out(_, _, _) => {}
    }
    out
}

/// Bound steps with the residual binder already opened by a fresh name.
pub fn one_b_open(supply: &mut NameSupply, p: &Pr) -> Vec<(ActB, (Name, Pr))> {
    one_b(supply, p)
        .into_iter()
        .map(|(l, b)| {
            let opened = b.unbind(supply);
            (l, opened)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::free_names;

    fn v(s: &str) -> Tm {
        Tm::var(s)
    }
    fn nm(s: &str) -> Name {
        Name::global(s)
    }
    fn out(x: &str, y: &str, p: Pr) -> Pr {
        Pr::Out(v(x), v(y), Box::new(p))
    }
    fn inp(x: &str, b: &str, p: Pr) -> Pr {
        Pr::In(v(x), Box::new(Scope::bind(&nm(b), p)))
    }
    fn par(p: Pr, q: Pr) -> Pr {
        Pr::Par(Box::new(p), Box::new(q))
    }

    /// The running example: x!x.0 | y!y.0 | z?(w).0, left associated.
    fn example() -> Pr {
        par(
            par(out("x", "x", Pr::Null), out("y", "y", Pr::Null)),
            inp("z", "w", Pr::Null),
        )
    }

    #[test]
    fn free_steps_of_example() {
        let mut supply = NameSupply::new();
        supply.observe_value(&example());
        let steps = one(&mut supply, &example());
        let expect = vec![
            (
                Act::Out(v("x"), v("x")),
                par(
                    par(Pr::Null, out("y", "y", Pr::Null)),
                    inp("z", "w", Pr::Null),
                ),
            ),
            (
                Act::Out(v("y"), v("y")),
                par(
                    par(out("x", "x", Pr::Null), Pr::Null),
                    inp("z", "w", Pr::Null),
                ),
            ),
        ];
        assert_eq!(steps, expect);
    }

    #[test]
    fn bound_steps_of_example() {
        let mut supply = NameSupply::new();
        supply.observe_value(&example());
        let steps = one_b(&mut supply, &example());
        assert_eq!(steps.len(), 1);
        let (l, b) = &steps[0];
        assert_eq!(*l, ActB::In(v("z")));
        let expect = Scope::bind(
            &nm("w"),
            par(
                par(out("x", "x", Pr::Null), out("y", "y", Pr::Null)),
                Pr::Null,
            ),
        );
        assert_eq!(*b, expect);
    }

    #[test]
    fn null_and_prefix_have_no_steps() {
        let mut supply = NameSupply::new();
        assert!(one(&mut supply, &Pr::Null).is_empty());
        assert!(one_b(&mut supply, &Pr::Tau(Box::new(Pr::Null))).is_empty());
    }

    #[test]
    fn restricted_output_has_only_bound_step() {
        // nu(x) y!x.0 : no free step, one bound output over y.
        let mut supply = NameSupply::new();
        let p = Pr::Nu(Box::new(Scope::bind(&nm("x"), out("y", "x", Pr::Null))));
        supply.observe_value(&p);
        assert!(one(&mut supply, &p).is_empty());
        let steps = one_b(&mut supply, &p);
        assert_eq!(steps.len(), 1);
        let (l, b) = &steps[0];
        assert_eq!(*l, ActB::Out(v("y")));
        assert_eq!(*b, Scope::bind(&nm("x"), Pr::Null));
    }

    #[test]
    fn close_extrudes_used_payload() {
        // nu(x)(y!x.0) | y?(z).z!z.0  --tau-->  nu(x)(0 | x!x.0)
        let mut supply = NameSupply::new();
        let p = par(
            Pr::Nu(Box::new(Scope::bind(&nm("x"), out("y", "x", Pr::Null)))),
            inp("y", "z", out("z", "z", Pr::Null)),
        );
        supply.observe_value(&p);
        let steps = one(&mut supply, &p);
        assert_eq!(steps.len(), 1);
        let (l, r) = &steps[0];
        assert_eq!(*l, Act::Tau);
        let expect = Pr::Nu(Box::new(Scope::bind(
            &nm("x"),
            par(Pr::Null, out("x", "x", Pr::Null)),
        )));
        assert_eq!(*r, expect);
    }

    #[test]
    fn interaction_substitutes_payload() {
        // x!v.0 | x?(y).y!y.0  --tau-->  0 | v!v.0
        let mut supply = NameSupply::new();
        let p = par(
            out("x", "v", Pr::Null),
            inp("x", "y", out("y", "y", Pr::Null)),
        );
        supply.observe_value(&p);
        let taus: Vec<Pr> = one(&mut supply, &p)
            .into_iter()
            .filter(|(l, _)| *l == Act::Tau)
            .map(|(_, r)| r)
            .collect();
        assert_eq!(taus, vec![par(Pr::Null, out("v", "v", Pr::Null))]);
    }

    #[test]
    fn close_rewraps_restriction() {
        // nu(x) y!x.0 | y?(z).0  --tau-->  nu(w)(0 | 0)
        let mut supply = NameSupply::new();
        let p = par(
            Pr::Nu(Box::new(Scope::bind(&nm("x"), out("y", "x", Pr::Null)))),
            inp("y", "z", Pr::Null),
        );
        supply.observe_value(&p);
        let steps = one(&mut supply, &p);
        assert_eq!(steps.len(), 1);
        let (l, r) = &steps[0];
        assert_eq!(*l, Act::Tau);
        let expect = Pr::Nu(Box::new(Scope::bind(&nm("c"), par(Pr::Null, Pr::Null))));
        assert_eq!(*r, expect);
    }

    #[test]
    fn labels_never_leak_restricted_names() {
        // nu(x)(x!x.0 + tau.x?(y).0) : the only visible step is tau.
        let mut supply = NameSupply::new();
        let p = Pr::Nu(Box::new(Scope::bind(
            &nm("x"),
            Pr::Plus(
                Box::new(out("x", "x", Pr::Null)),
                Box::new(Pr::Tau(Box::new(inp("x", "y", Pr::Null)))),
            ),
        )));
        supply.observe_value(&p);
        let frees = one(&mut supply, &p);
        assert_eq!(frees.len(), 1);
        assert_eq!(frees[0].0, Act::Tau);
        for (l, _) in &frees {
            for n in free_names(l) {
                assert_eq!(n.index(), 0, "label leaked a generated name: {n}");
            }
        }
        assert!(one_b(&mut supply, &p).is_empty());
    }
}
