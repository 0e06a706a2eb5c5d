//! Feature-value unification: atom sets, variables, negated constants and
//! deferred anti-unification.

use malparse::feature::{unify_values, AtomSet, Bindings, ValueTerm, VarId};
use malparse::Grammar;

fn main() {
    let g = Grammar::demo();
    let v = g.vocab();
    let set = |e: &str| v.atom_set(e).unwrap();
    let show = |r: Result<ValueTerm, _>| match r {
        Ok(ValueTerm::Atoms(s)) => v.format_set(s),
        Ok(other) => format!("{other:?}"),
        Err(_) => "failure".to_owned(),
    };
    let atoms = |s: AtomSet| ValueTerm::Atoms(s);

    let mut env = Bindings::with_vars(2);
    println!("{{s}} with {{3s}}        -> {}", show(unify_values(atoms(set("s")), atoms(set("3s")), &mut env)));
    println!("{{s}} with {{p}}         -> {}", show(unify_values(atoms(set("s")), atoms(set("p")), &mut env)));

    let a = ValueTerm::Var(VarId(0));
    println!("?a with {{s|p}}        -> {}", show(unify_values(a, atoms(set("s|p")), &mut env)));
    println!("?a with {{3p}}         -> {}", show(unify_values(a, atoms(set("3p")), &mut env)));

    let not_sg = ValueTerm::Negated { var: VarId(1), excluded: set("s") };
    let mut env = Bindings::with_vars(2);
    println!("!s with {{p}}          -> {}", show(unify_values(not_sg, atoms(set("p")), &mut env)));
    println!("!s with {{s|p}}        -> {}", show(unify_values(not_sg, atoms(set("s|p")), &mut env)));

    // ?!a meets its value before ?a is bound: the check waits for finalize
    let mut env = Bindings::with_vars(1);
    let _ = unify_values(ValueTerm::Anti(VarId(0)), atoms(set("p")), &mut env);
    let _ = unify_values(a, atoms(set("3s")), &mut env);
    println!("?!a={{p}}, ?a={{3s}}     -> finalize {:?}", env.finalize());
    let mut env = Bindings::with_vars(1);
    let _ = unify_values(ValueTerm::Anti(VarId(0)), atoms(set("s|p")), &mut env);
    let _ = unify_values(a, atoms(set("3s")), &mut env);
    println!("?!a={{s|p}}, ?a={{3s}}   -> finalize {:?}", env.finalize());
}
