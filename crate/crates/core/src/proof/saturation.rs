//! Forward saturation of the introduction/elimination rules over the
//! analytic universe `U(Γ, φ)`: subsentences of the premises and goals,
//! their negations, and `⊥`.
//!
//! Elimination rules never leave `U`; introduction rules only fire when
//! their conclusion is already in `U`. Every formula is processed once,
//! so saturation runs in time polynomial in `|U|`.

use std::collections::{HashMap, VecDeque};

use super::trace::{DerivationTrace, TraceStep};
use super::Rule;
use crate::syntax::{subsentences, Sentence};

#[derive(Debug, Clone, Copy)]
enum Shape {
    Leaf,
    Bot,
    Neg(usize),
    Conj(usize, usize),
    Disj(usize, usize),
}

/// Indexed analytic universe.
#[derive(Debug, Clone)]
pub(crate) struct Universe {
    formulas: Vec<Sentence>,
    index: HashMap<Sentence, usize>,
    shape: Vec<Shape>,
    neg_of: Vec<Option<usize>>,
    conj_left: Vec<Vec<usize>>,
    conj_right: Vec<Vec<usize>>,
    disj_left: Vec<Vec<usize>>,
    disj_right: Vec<Vec<usize>>,
    bot: usize,
}

impl Universe {
    pub(crate) fn build<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> Universe {
        let closed = subsentences(sentences);
        let mut formulas: Vec<Sentence> = Vec::with_capacity(closed.len() * 2 + 1);
        let mut index = HashMap::with_capacity(closed.len() * 2 + 1);
        let mut push = |s: Sentence, formulas: &mut Vec<Sentence>| {
            if !index.contains_key(&s) {
                index.insert(s.clone(), formulas.len());
                formulas.push(s);
            }
        };
        for s in &closed {
            push(s.clone(), &mut formulas);
        }
        for s in &closed {
            push(s.negated(), &mut formulas);
        }
        push(Sentence::Bot, &mut formulas);

        let n = formulas.len();
        let mut shape = Vec::with_capacity(n);
        let mut neg_of = vec![None; n];
        let mut conj_left = vec![Vec::new(); n];
        let mut conj_right = vec![Vec::new(); n];
        let mut disj_left = vec![Vec::new(); n];
        let mut disj_right = vec![Vec::new(); n];
        for (i, f) in formulas.iter().enumerate() {
            let idx = |s: &Sentence| index[s];
            shape.push(match f {
                Sentence::Atom(_) => Shape::Leaf,
                Sentence::Bot => Shape::Bot,
                Sentence::Neg(c) => {
                    let c = idx(c);
                    neg_of[c] = Some(i);
                    Shape::Neg(c)
                }
                Sentence::Conj(l, r) => {
                    let (l, r) = (idx(l), idx(r));
                    conj_left[l].push(i);
                    conj_right[r].push(i);
                    Shape::Conj(l, r)
                }
                Sentence::Disj(l, r) => {
                    let (l, r) = (idx(l), idx(r));
                    disj_left[l].push(i);
                    disj_right[r].push(i);
                    Shape::Disj(l, r)
                }
            });
        }
        let bot = index[&Sentence::Bot];
        Universe {
            formulas,
            index,
            shape,
            neg_of,
            conj_left,
            conj_right,
            disj_left,
            disj_right,
            bot,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.formulas.len()
    }

    pub(crate) fn contains(&self, s: &Sentence) -> bool {
        self.index.contains_key(s)
    }
}

#[derive(Debug, Clone)]
struct Justification {
    rule: Rule,
    premises: Vec<usize>,
}

#[derive(Debug, Clone)]
struct State {
    derived: Vec<Option<Justification>>,
    order: Vec<usize>,
    bottom: bool,
    queue: VecDeque<usize>,
}

impl State {
    fn has(&self, i: usize) -> bool {
        self.derived[i].is_some()
    }

    fn add(&mut self, u: &Universe, i: usize, rule: Rule, premises: Vec<usize>) {
        if self.bottom || self.derived[i].is_some() {
            return;
        }
        self.derived[i] = Some(Justification { rule, premises });
        self.order.push(i);
        if i == u.bot {
            self.bottom = true;
        } else {
            self.queue.push_back(i);
        }
    }

    fn add_opt(&mut self, u: &Universe, i: Option<usize>, rule: Rule, premises: Vec<usize>) {
        if let Some(i) = i {
            self.add(u, i, rule, premises);
        }
    }

    /// The negation of `i`, if it is in the universe and derived.
    fn derived_neg(&self, u: &Universe, i: usize) -> Option<usize> {
        u.neg_of[i].filter(|&n| self.has(n))
    }

    /// Applies every rule in which `x` takes part, given everything derived so far.
    fn fire(&mut self, u: &Universe, x: usize) {
        // x as the major premise of an elimination.
        match u.shape[x] {
            Shape::Conj(a, b) => {
                self.add(u, a, Rule::AndE1, vec![x]);
                self.add(u, b, Rule::AndE2, vec![x]);
            }
            Shape::Disj(a, b) => {
                if let Some(na) = self.derived_neg(u, a) {
                    self.add(u, b, Rule::OrE1, vec![x, na]);
                }
                if let Some(nb) = self.derived_neg(u, b) {
                    self.add(u, a, Rule::OrE2, vec![x, nb]);
                }
            }
            Shape::Neg(y) => {
                if self.has(y) {
                    self.add(u, u.bot, Rule::BotI, vec![y, x]);
                }
                match u.shape[y] {
                    Shape::Neg(z) => self.add(u, z, Rule::NegNegE, vec![x]),
                    Shape::Disj(a, b) => {
                        self.add_opt(u, u.neg_of[a], Rule::NegOrE1, vec![x]);
                        self.add_opt(u, u.neg_of[b], Rule::NegOrE2, vec![x]);
                    }
                    Shape::Conj(a, b) => {
                        if self.has(a) {
                            self.add_opt(u, u.neg_of[b], Rule::NegAndE1, vec![x, a]);
                        }
                        if self.has(b) {
                            self.add_opt(u, u.neg_of[a], Rule::NegAndE2, vec![x, b]);
                        }
                    }
                    Shape::Leaf | Shape::Bot => {}
                }
                // x = ¬y as the minor premise of a disjunctive syllogism.
                for &d in &u.disj_left[y] {
                    if let (true, Shape::Disj(_, b)) = (self.has(d), u.shape[d]) {
                        self.add(u, b, Rule::OrE1, vec![d, x]);
                    }
                }
                for &d in &u.disj_right[y] {
                    if let (true, Shape::Disj(a, _)) = (self.has(d), u.shape[d]) {
                        self.add(u, a, Rule::OrE2, vec![d, x]);
                    }
                }
                // Negative introductions with x = ¬y.
                for &c in &u.conj_left[y] {
                    self.add_opt(u, u.neg_of[c], Rule::NegAndI1, vec![x]);
                }
                for &c in &u.conj_right[y] {
                    self.add_opt(u, u.neg_of[c], Rule::NegAndI2, vec![x]);
                }
                for &d in &u.disj_left[y] {
                    if let Shape::Disj(_, b) = u.shape[d] {
                        if let Some(nb) = self.derived_neg(u, b) {
                            self.add_opt(u, u.neg_of[d], Rule::NegOrI, vec![x, nb]);
                        }
                    }
                }
                for &d in &u.disj_right[y] {
                    if let Shape::Disj(a, _) = u.shape[d] {
                        if let Some(na) = self.derived_neg(u, a) {
                            self.add_opt(u, u.neg_of[d], Rule::NegOrI, vec![na, x]);
                        }
                    }
                }
            }
            Shape::Leaf | Shape::Bot => {}
        }

        // x as the minor premise of ¬∧E.
        for &c in &u.conj_left[x] {
            if let (Some(nc), Shape::Conj(_, b)) = (self.derived_neg(u, c), u.shape[c]) {
                self.add_opt(u, u.neg_of[b], Rule::NegAndE1, vec![nc, x]);
            }
        }
        for &c in &u.conj_right[x] {
            if let (Some(nc), Shape::Conj(a, _)) = (self.derived_neg(u, c), u.shape[c]) {
                self.add_opt(u, u.neg_of[a], Rule::NegAndE2, vec![nc, x]);
            }
        }
        if let Some(nx) = self.derived_neg(u, x) {
            self.add(u, u.bot, Rule::BotI, vec![x, nx]);
        }

        // Positive introductions.
        for &c in &u.conj_left[x] {
            if let Shape::Conj(_, b) = u.shape[c] {
                if self.has(b) {
                    self.add(u, c, Rule::AndI, vec![x, b]);
                }
            }
        }
        for &c in &u.conj_right[x] {
            if let Shape::Conj(a, _) = u.shape[c] {
                if self.has(a) {
                    self.add(u, c, Rule::AndI, vec![a, x]);
                }
            }
        }
        for &d in &u.disj_left[x] {
            self.add(u, d, Rule::OrI1, vec![x]);
        }
        for &d in &u.disj_right[x] {
            self.add(u, d, Rule::OrI2, vec![x]);
        }
        if let Some(nx) = u.neg_of[x] {
            self.add_opt(u, u.neg_of[nx], Rule::NegNegI, vec![x]);
        }
    }
}

/// The saturated set of 0-depth consequences of a premise set, restricted
/// to the universe built from the premises and the registered goals.
#[derive(Debug, Clone)]
pub struct Saturation {
    premises: Vec<Sentence>,
    goals: Vec<Sentence>,
    universe: Universe,
    state: State,
}

impl Saturation {
    /// Saturates `premises` over `U(premises, goals)`.
    pub fn new(premises: &[Sentence], goals: &[Sentence]) -> Saturation {
        let universe = Universe::build(premises.iter().chain(goals));
        let mut state = State {
            derived: vec![None; universe.len()],
            order: Vec::new(),
            bottom: false,
            queue: VecDeque::new(),
        };
        for p in premises {
            state.add(&universe, universe.index[p], Rule::Premise, vec![]);
        }
        while let Some(x) = state.queue.pop_front() {
            if state.bottom {
                break;
            }
            state.fire(&universe, x);
        }
        state.queue.clear();
        Saturation {
            premises: premises.to_vec(),
            goals: goals.to_vec(),
            universe,
            state,
        }
    }

    /// Whether `⊥` was derived.
    pub fn is_inconsistent(&self) -> bool {
        self.state.bottom
    }

    /// Whether `s` lies in the universe this saturation ranged over.
    pub fn covers(&self, s: &Sentence) -> bool {
        self.universe.contains(s)
    }

    pub fn premises(&self) -> &[Sentence] {
        &self.premises
    }

    pub fn goals(&self) -> &[Sentence] {
        &self.goals
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    /// `premises ⊢₀ s`. Only meaningful when `self.covers(s)`, or when
    /// the premises are inconsistent.
    pub fn derives(&self, s: &Sentence) -> bool {
        self.state.bottom
            || self
                .universe
                .index
                .get(s)
                .is_some_and(|&i| self.state.has(i))
    }

    /// Every formula derived, in derivation order.
    pub fn derived(&self) -> impl Iterator<Item = &Sentence> {
        self.state.order.iter().map(|&i| &self.universe.formulas[i])
    }

    /// A derivation of `goal` from the premises, if one exists.
    pub fn trace(&self, goal: &Sentence) -> Option<DerivationTrace> {
        let target = match self.universe.index.get(goal) {
            Some(&i) if self.state.has(i) => i,
            _ if self.state.bottom => self.universe.bot,
            _ => return None,
        };
        // Collect ancestors of the target.
        let mut needed = vec![false; self.universe.len()];
        let mut stack = vec![target];
        while let Some(i) = stack.pop() {
            if needed[i] {
                continue;
            }
            needed[i] = true;
            let just = self.state.derived[i].as_ref().expect("ancestors are derived");
            stack.extend(just.premises.iter().copied());
        }
        let mut step_of = HashMap::new();
        let mut steps = Vec::new();
        for &i in &self.state.order {
            if !needed[i] {
                continue;
            }
            let just = self.state.derived[i].as_ref().unwrap();
            step_of.insert(i, steps.len());
            steps.push(TraceStep {
                sentence: self.universe.formulas[i].clone(),
                rule: just.rule,
                premises: just.premises.iter().map(|p| step_of[p]).collect(),
            });
        }
        if target == self.universe.bot && *goal != Sentence::Bot {
            steps.push(TraceStep {
                sentence: goal.clone(),
                rule: Rule::BotE,
                premises: vec![step_of[&self.universe.bot]],
            });
        }
        Some(DerivationTrace { steps })
    }
}
