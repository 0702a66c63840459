//! Generators and independent oracles shared by the integration tests.
//! Nothing here calls the library's own evaluator or saturation engine.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use dbbel::syntax::Sentence;
use num_rational::BigRational;
use rand::Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn var_names(n: usize) -> Vec<String> {
    ["p", "q", "r", "s", "t"][..n].iter().map(|s| s.to_string()).collect()
}

/// A random sentence of AST depth at most `depth`.
pub fn random_sentence<R: Rng>(rng: &mut R, vars: &[String], depth: usize, bot: bool) -> Sentence {
    if depth == 0 || rng.gen_bool(0.25) {
        if bot && rng.gen_bool(0.08) {
            return Sentence::Bot;
        }
        return Sentence::atom(&vars[rng.gen_range(0..vars.len())]);
    }
    match rng.gen_range(0..3) {
        0 => Sentence::neg(random_sentence(rng, vars, depth - 1, bot)),
        1 => Sentence::conj(
            random_sentence(rng, vars, depth - 1, bot),
            random_sentence(rng, vars, depth - 1, bot),
        ),
        _ => Sentence::disj(
            random_sentence(rng, vars, depth - 1, bot),
            random_sentence(rng, vars, depth - 1, bot),
        ),
    }
}

fn collect_vars(s: &Sentence, out: &mut BTreeSet<String>) {
    match s {
        Sentence::Atom(a) => {
            out.insert(a.to_string());
        }
        Sentence::Bot => {}
        Sentence::Neg(c) => collect_vars(c, out),
        Sentence::Conj(l, r) | Sentence::Disj(l, r) => {
            collect_vars(l, out);
            collect_vars(r, out);
        }
    }
}

pub fn truth(s: &Sentence, v: &BTreeMap<String, bool>) -> bool {
    match s {
        Sentence::Atom(a) => v[&a.to_string()],
        Sentence::Bot => false,
        Sentence::Neg(c) => !truth(c, v),
        Sentence::Conj(l, r) => truth(l, v) && truth(r, v),
        Sentence::Disj(l, r) => truth(l, v) || truth(r, v),
    }
}

/// Every valuation of the variables occurring in `sentences`.
pub fn valuations(sentences: &[&Sentence]) -> Vec<BTreeMap<String, bool>> {
    let mut vars = BTreeSet::new();
    for s in sentences {
        collect_vars(s, &mut vars);
    }
    let vars: Vec<String> = vars.into_iter().collect();
    (0..1u32 << vars.len())
        .map(|mask| {
            vars.iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), mask >> i & 1 == 1))
                .collect()
        })
        .collect()
}

/// Truth-table entailment.
pub fn entails(premises: &[Sentence], goal: &Sentence) -> bool {
    let all: Vec<&Sentence> = premises.iter().chain([goal]).collect();
    valuations(&all)
        .iter()
        .all(|v| !premises.iter().all(|p| truth(p, v)) || truth(goal, v))
}

pub fn satisfiable(s: &Sentence) -> bool {
    valuations(&[s]).iter().any(|v| truth(s, v))
}

/// Every atom of the language over `vars`, with its valuation, in the
/// order `p & q`, `p & !q`, `!p & q`, ...
pub fn atoms_with_valuations(vars: &[String]) -> Vec<(Sentence, BTreeMap<String, bool>)> {
    let n = vars.len();
    (0..1u32 << n)
        .map(|mask| {
            let mut v = BTreeMap::new();
            let mut lits = Vec::new();
            for (i, name) in vars.iter().enumerate() {
                let negative = mask >> (n - 1 - i) & 1 == 1;
                v.insert(name.clone(), !negative);
                let a = Sentence::atom(name);
                lits.push(if negative { Sentence::neg(a) } else { a });
            }
            let mut it = lits.into_iter();
            let first = it.next().unwrap();
            (it.fold(first, Sentence::conj), v)
        })
        .collect()
}

/// Random nonnegative rationals summing to 1, one per slot.
pub fn random_distribution<R: Rng>(rng: &mut R, slots: usize) -> Vec<BigRational> {
    loop {
        let w: Vec<i64> = (0..slots).map(|_| rng.gen_range(0..=12)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| q(x, total)).collect();
        }
    }
}

fn subformulas(s: &Sentence, out: &mut Vec<Sentence>) {
    if !out.contains(s) {
        out.push(s.clone());
    }
    match s {
        Sentence::Neg(c) => subformulas(c, out),
        Sentence::Conj(l, r) | Sentence::Disj(l, r) => {
            subformulas(l, out);
            subformulas(r, out);
        }
        _ => {}
    }
}

pub fn subformula_set(sentences: &[Sentence]) -> Vec<Sentence> {
    let mut out = Vec::new();
    for s in sentences {
        subformulas(s, &mut out);
    }
    out
}

/// The analytic universe: subformulas, their negations, and `⊥`.
pub fn analytic_universe(premises: &[Sentence], goal: &Sentence) -> HashSet<Sentence> {
    let mut all: Vec<Sentence> = premises.to_vec();
    all.push(goal.clone());
    let sub = subformula_set(&all);
    let mut u: HashSet<Sentence> = sub.iter().cloned().collect();
    u.extend(sub.iter().map(|s| Sentence::neg(s.clone())));
    u.insert(Sentence::Bot);
    u
}

fn is_neg_of(a: &Sentence, b: &Sentence) -> bool {
    matches!(b, Sentence::Neg(x) if **x == *a)
}

/// Naive proof search for `⊢₀`: applies every introduction and elimination
/// rule to every combination of derived sentences until nothing new lies
/// in `universe`. Slow, and written without reference to the engine.
pub fn naive_derives0(premises: &[Sentence], goal: &Sentence, universe: &HashSet<Sentence>) -> bool {
    use Sentence::*;
    let mut derived: Vec<Sentence> = Vec::new();
    let mut seen: HashSet<Sentence> = HashSet::new();
    for p in premises {
        if seen.insert(p.clone()) {
            derived.push(p.clone());
        }
    }
    loop {
        let mut fresh: Vec<Sentence> = Vec::new();
        let add = |s: Sentence, fresh: &mut Vec<Sentence>| {
            if universe.contains(&s) && !seen.contains(&s) && !fresh.contains(&s) {
                fresh.push(s);
            }
        };
        for a in &derived {
            // Single-premise rules.
            match a {
                Conj(l, r) => {
                    add((**l).clone(), &mut fresh);
                    add((**r).clone(), &mut fresh);
                }
                Neg(x) => match &**x {
                    Disj(l, r) => {
                        add(Neg(l.clone()), &mut fresh);
                        add(Neg(r.clone()), &mut fresh);
                    }
                    Neg(y) => add((**y).clone(), &mut fresh),
                    _ => {}
                },
                _ => {}
            }
            add(Sentence::neg(Sentence::neg(a.clone())), &mut fresh);
            for u in universe {
                match u {
                    Disj(l, r) if **l == *a || **r == *a => add(u.clone(), &mut fresh),
                    Neg(x) => {
                        if let Conj(l, r) = &**x {
                            if is_neg_of(l, a) || is_neg_of(r, a) {
                                add(u.clone(), &mut fresh);
                            }
                        }
                    }
                    _ => {}
                }
            }
            // Two-premise rules.
            for b in &derived {
                add(Sentence::conj(a.clone(), b.clone()), &mut fresh);
                if is_neg_of(a, b) {
                    add(Bot, &mut fresh);
                }
                if let Disj(l, r) = a {
                    if is_neg_of(l, b) {
                        add((**r).clone(), &mut fresh);
                    }
                    if is_neg_of(r, b) {
                        add((**l).clone(), &mut fresh);
                    }
                }
                if let Neg(x) = a {
                    if let Conj(l, r) = &**x {
                        if **l == *b {
                            add(Neg(r.clone()), &mut fresh);
                        }
                        if **r == *b {
                            add(Neg(l.clone()), &mut fresh);
                        }
                    }
                }
                if let (Neg(na), Neg(nb)) = (a, b) {
                    add(Sentence::neg(Sentence::disj((**na).clone(), (**nb).clone())), &mut fresh);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for s in fresh {
            seen.insert(s.clone());
            derived.push(s);
        }
        if seen.contains(&Bot) {
            return true;
        }
    }
    seen.contains(&Bot) || seen.contains(goal)
}

/// The analytic universe enlarged with double negations and every
/// pairwise conjunction and disjunction of subformulas.
pub fn enlarged_universe(premises: &[Sentence], goal: &Sentence) -> HashSet<Sentence> {
    let mut u = analytic_universe(premises, goal);
    let mut all = premises.to_vec();
    all.push(goal.clone());
    let sub = subformula_set(&all);
    let base: Vec<Sentence> = u.iter().cloned().collect();
    for s in base {
        u.insert(Sentence::neg(Sentence::neg(s)));
    }
    for a in &sub {
        for b in &sub {
            u.insert(Sentence::conj(a.clone(), b.clone()));
            u.insert(Sentence::disj(a.clone(), b.clone()));
        }
    }
    u
}
