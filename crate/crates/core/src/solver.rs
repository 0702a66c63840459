//! Linear belief constraints and the satisfiability and inference-bound
//! problems over depth-bounded belief functions.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::belief::{assess, b_set, pl_set, BeliefError, MassFunction};
use crate::forest::{
    analytic_pool, deep_contradictions, enumerate_uniform_analytic, new_forest,
    select_pareto_maximal, Forest, ForestError, NodeId,
};
use crate::proof::Reasoner;
use crate::ratlp::{solve, LinearProgram, LpError, LpStatus, Relation, Row, Sense};
use crate::syntax::{BruteForceLimit, OracleError, Root, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Bel,
    Pl,
}

/// `Σ d·B(φ) rel z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawConstraint {
    pub terms: Vec<(BigRational, Sentence)>,
    pub rel: Relation,
    pub bound: BigRational,
}

/// `Σ a·B(φ) + w ≤ Σ b·Pl(φ) + v` with natural coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedConstraint {
    pub bel: Vec<(BigUint, Sentence)>,
    pub w: BigUint,
    pub pl: Vec<(BigUint, Sentence)>,
    pub v: BigUint,
}

/// `Σ c·M(φ) rel bound`, the common form both kinds of input reduce to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(BigRational, Measure, Sentence)>,
    pub rel: Relation,
    pub bound: BigRational,
}

impl From<&RawConstraint> for LinearConstraint {
    fn from(c: &RawConstraint) -> Self {
        LinearConstraint {
            terms: c
                .terms
                .iter()
                .map(|(d, s)| (d.clone(), Measure::Bel, s.clone()))
                .collect(),
            rel: c.rel,
            bound: c.bound.clone(),
        }
    }
}

fn nat(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

impl From<&NormalizedConstraint> for LinearConstraint {
    fn from(c: &NormalizedConstraint) -> Self {
        let bel = c.bel.iter().map(|(a, s)| (nat(a), Measure::Bel, s.clone()));
        let pl = c.pl.iter().map(|(b, s)| (-nat(b), Measure::Pl, s.clone()));
        LinearConstraint {
            terms: bel.chain(pl).collect(),
            rel: Relation::Le,
            bound: nat(&c.v) - nat(&c.w),
        }
    }
}

impl LinearConstraint {
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.terms.iter().map(|t| &t.2)
    }

    /// Evaluates the constraint against the measures of a mass function.
    pub fn holds(&self, forest: &Forest, mass: &MassFunction, reasoner: &Reasoner) -> bool {
        let lhs: BigRational = self
            .terms
            .iter()
            .map(|(c, m, s)| {
                let a = assess(forest, mass, s, reasoner);
                c * match m {
                    Measure::Bel => a.belief,
                    Measure::Pl => a.plausibility,
                }
            })
            .sum();
        Row::new(vec![lhs], self.rel, self.bound.clone()).holds(&[BigRational::one()])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("constraint {0} has no terms")]
    EmptyConstraint(usize),
    #[error("the support is empty once 0-inconsistent sentences are removed")]
    EmptySupport,
    #[error("a query sentence is required")]
    MissingQuery,
    #[error("depth {found} is not allowed here (expected {expected})")]
    Depth { expected: String, found: usize },
    #[error("enumeration needs up to {required} forests, above the cap of {cap}")]
    Budget { required: BigUint, cap: u64 },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("witness failed re-verification: {0}")]
    Verification(String),
}

fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn to_nat(v: &BigRational, scale: &BigInt) -> BigUint {
    (v * BigRational::from_integer(scale.clone()))
        .to_integer()
        .to_biguint()
        .expect("nonnegative after moving terms")
}

/// Rewrites pure-belief constraints into the two-sided form: `=` splits
/// into two rows, `≥` flips, negative terms move across, rows are scaled
/// to natural numbers, and terms ending up on the right become
/// plausibility terms.
pub fn normalize(raw: &[RawConstraint]) -> Result<Vec<NormalizedConstraint>, SolverError> {
    let mut out = Vec::new();
    for (i, c) in raw.iter().enumerate() {
        if c.terms.is_empty() {
            return Err(SolverError::EmptyConstraint(i));
        }
        let le = (c.terms.clone(), c.bound.clone());
        let ge = || {
            let terms = c.terms.iter().map(|(d, s)| (-d, s.clone())).collect();
            (terms, -&c.bound)
        };
        let rows = match c.rel {
            Relation::Le => vec![le],
            Relation::Ge => vec![ge()],
            Relation::Eq => vec![le, ge()],
        };
        for (terms, z) in rows {
            let scale = lcm_of_denominators(terms.iter().map(|t| &t.0).chain([&z]));
            let mut bel = Vec::new();
            let mut pl = Vec::new();
            for (d, s) in &terms {
                if d.is_positive() {
                    bel.push((to_nat(d, &scale), s.clone()));
                } else if d.is_negative() {
                    pl.push((to_nat(&-d, &scale), s.clone()));
                }
            }
            let (w, v) = if z.is_negative() {
                (to_nat(&-&z, &scale), BigUint::zero())
            } else {
                (BigUint::zero(), to_nat(&z, &scale))
            };
            out.push(NormalizedConstraint { bel, w, pl, v });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraints {
    /// Pure-belief constraints, read with belief on both sides.
    Raw(Vec<RawConstraint>),
    Normalized(Vec<NormalizedConstraint>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub constraints: Constraints,
    pub depth: usize,
    pub query: Option<Sentence>,
    /// Overrides the support derived from the constraints.
    pub supp: Option<Vec<Sentence>>,
}

impl Problem {
    pub fn new(constraints: Constraints, depth: usize) -> Problem {
        Problem {
            constraints,
            depth,
            query: None,
            supp: None,
        }
    }

    pub fn linear(&self) -> Result<Vec<LinearConstraint>, SolverError> {
        match &self.constraints {
            Constraints::Raw(cs) => cs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if c.terms.is_empty() {
                        Err(SolverError::EmptyConstraint(i))
                    } else {
                        Ok(c.into())
                    }
                })
                .collect(),
            Constraints::Normalized(cs) => Ok(cs.iter().map(Into::into).collect()),
        }
    }

    /// The explicit support, or the constraint sentences in order of first
    /// occurrence.
    pub fn supp(&self) -> Result<Vec<Sentence>, SolverError> {
        if let Some(s) = &self.supp {
            return Ok(dedup(s.iter()));
        }
        let linear = self.linear()?;
        Ok(dedup(linear.iter().flat_map(LinearConstraint::sentences)))
    }

    /// The same problem with raw constraints rewritten by [`normalize`].
    pub fn normalized(&self) -> Result<Problem, SolverError> {
        let constraints = match &self.constraints {
            Constraints::Raw(cs) => Constraints::Normalized(normalize(cs)?),
            other => other.clone(),
        };
        Ok(Problem {
            constraints,
            supp: Some(self.supp()?),
            ..self.clone()
        })
    }
}

fn dedup<'a>(items: impl Iterator<Item = &'a Sentence>) -> Vec<Sentence> {
    let mut out: Vec<Sentence> = Vec::new();
    for s in items {
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_depth: usize,
    /// Largest permitted `|S(Supp)|^(2^k - 1)`.
    pub max_forests: u64,
    pub limit: BruteForceLimit,
    /// Evaluate candidate forests on the rayon pool.
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_depth: 3,
            max_forests: 1_000_000,
            limit: BruteForceLimit::default(),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Forests produced by the uniform analytic enumeration.
    pub enumerated: usize,
    /// Those surviving the maximality and deep-contradiction filters.
    pub admissible: usize,
    /// Linear systems examined, in canonical order.
    pub checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub forest: Forest,
    pub mass: MassFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lower: BigRational,
    pub upper: BigRational,
    pub lower_witness: Witness,
    pub upper_witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    pub witness: Option<Witness>,
    pub bounds: Option<Bounds>,
    pub stats: SearchStats,
}

/// `|S(Supp)|^(2^k - 1)`.
pub fn enumeration_bound(pool_size: usize, k: usize) -> BigUint {
    let positions = (BigUint::one() << k) - BigUint::one();
    let exp: u32 = positions.try_into().expect("depth is small");
    BigUint::from(pool_size).pow(exp)
}

/// A feasible point and, when optimizing, the optimum.
type Solution = (Vec<BigRational>, Option<BigRational>);

/// The linear system for one forest: constraint rows, total mass 1, and
/// no mass on 0-inconsistent leaves.
struct System<'a> {
    forest: &'a Forest,
    leaves: Vec<(NodeId, Root)>,
    rows: Vec<Row>,
}

impl<'a> System<'a> {
    fn new(forest: &'a Forest, constraints: &[LinearConstraint], reasoner: &Reasoner) -> Self {
        let leaves: Vec<(NodeId, Root)> = forest.leaves().into_iter().map(|l| (l.id, l.info)).collect();
        let n = leaves.len();
        let mut rows = Vec::new();
        for c in constraints {
            let mut coeffs = vec![BigRational::zero(); n];
            for (coef, measure, s) in &c.terms {
                let set = match measure {
                    Measure::Bel => b_set(forest, s, reasoner),
                    Measure::Pl => pl_set(forest, s, reasoner),
                };
                for (j, (id, _)) in leaves.iter().enumerate() {
                    if set.contains(id) {
                        coeffs[j] += coef;
                    }
                }
            }
            rows.push(Row::new(coeffs, c.rel, c.bound.clone()));
        }
        rows.push(Row::new(vec![BigRational::one(); n], Relation::Eq, BigRational::one()));
        for (j, (_, info)) in leaves.iter().enumerate() {
            if reasoner.inconsistent(info) {
                let mut coeffs = vec![BigRational::zero(); n];
                coeffs[j] = BigRational::one();
                rows.push(Row::new(coeffs, Relation::Eq, BigRational::zero()));
            }
        }
        System { forest, leaves, rows }
    }

    fn indicator(&self, ids: &[NodeId]) -> Vec<BigRational> {
        self.leaves
            .iter()
            .map(|(id, _)| if ids.contains(id) { BigRational::one() } else { BigRational::zero() })
            .collect()
    }

    fn run(&self, objective: Option<(Vec<BigRational>, Sense)>) -> Result<Option<Solution>, SolverError> {
        let lp = match objective {
            None => LinearProgram::feasibility(self.leaves.len(), self.rows.clone()),
            Some((c, sense)) => LinearProgram::optimize(self.leaves.len(), self.rows.clone(), c, sense),
        };
        let out = solve(&lp)?;
        Ok(match out.status {
            LpStatus::Infeasible => None,
            LpStatus::Unbounded => unreachable!("masses are bounded"),
            _ => Some((out.witness.expect("feasible"), out.optimum)),
        })
    }

    fn witness(
        &self,
        x: Vec<BigRational>,
        constraints: &[LinearConstraint],
        reasoner: &Reasoner,
    ) -> Result<Witness, SolverError> {
        let weights: BTreeMap<NodeId, BigRational> =
            self.leaves.iter().map(|(id, _)| *id).zip(x).collect();
        let mass = MassFunction::new(self.forest, weights, reasoner)?;
        for (i, c) in constraints.iter().enumerate() {
            if !c.holds(self.forest, &mass, reasoner) {
                return Err(SolverError::Verification(format!("constraint {i} fails")));
            }
        }
        Ok(Witness {
            forest: self.forest.clone(),
            mass,
        })
    }
}

struct Prepared {
    constraints: Vec<LinearConstraint>,
    forests: Vec<Forest>,
    stats: SearchStats,
    reasoner: Reasoner,
}

fn prepare(problem: &Problem, config: &SolverConfig) -> Result<Prepared, SolverError> {
    if problem.depth > config.max_depth {
        return Err(SolverError::Depth {
            expected: format!("at most {}", config.max_depth),
            found: problem.depth,
        });
    }
    let constraints = problem.linear()?;
    let supp: Vec<Root> = problem.supp()?.into_iter().map(Root::Info).collect();
    let pool = analytic_pool(&supp);
    let mut goals = pool.clone();
    goals.extend(constraints.iter().flat_map(|c| c.sentences().cloned()));
    goals.extend(problem.query.clone());
    let reasoner = Reasoner::with_goals(&goals);
    let start = new_forest(&supp).map_err(|e| match e {
        ForestError::EmptySupport | ForestError::AllInconsistent => SolverError::EmptySupport,
        other => other.into(),
    })?;
    if problem.depth == 0 {
        return Ok(Prepared {
            constraints,
            forests: vec![start],
            stats: SearchStats {
                enumerated: 1,
                admissible: 1,
                checked: 0,
            },
            reasoner,
        });
    }
    let required = enumeration_bound(pool.len(), problem.depth);
    if required > BigUint::from(config.max_forests) {
        return Err(SolverError::Budget {
            required,
            cap: config.max_forests,
        });
    }
    let all = enumerate_uniform_analytic(&supp, problem.depth, Some(&pool), &reasoner)?;
    let maximal = select_pareto_maximal(&all, &pool, &reasoner);
    let mut forests = Vec::new();
    for f in maximal {
        if deep_contradictions(f, config.limit, &reasoner)?.is_empty() {
            forests.push(f.clone());
        }
    }
    Ok(Prepared {
        constraints,
        stats: SearchStats {
            enumerated: all.len(),
            admissible: forests.len(),
            checked: 0,
        },
        forests,
        reasoner,
    })
}

/// Maps `f` over `items` in canonical order, in parallel chunks when asked,
/// stopping after the first chunk in which `stop` holds for some result.
/// Returns results up to and including the first stopping one.
fn scan<T: Sync, R: Send>(
    items: &[T],
    parallel: bool,
    f: impl Fn(&T) -> Result<R, SolverError> + Sync,
    stop: impl Fn(&R) -> bool,
) -> Result<Vec<R>, SolverError> {
    let chunk = if parallel { rayon::current_num_threads().max(1) * 2 } else { 1 };
    let mut out = Vec::new();
    for part in items.chunks(chunk) {
        let results: Vec<Result<R, SolverError>> = if parallel {
            part.par_iter().map(&f).collect()
        } else {
            part.iter().map(&f).collect()
        };
        for r in results {
            let r = r?;
            let done = stop(&r);
            out.push(r);
            if done {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// GENSAT at depth 0: one linear system over the support itself.
pub fn gensat0(problem: &Problem, config: &SolverConfig) -> Result<SolveResult, SolverError> {
    if problem.depth != 0 {
        return Err(SolverError::Depth {
            expected: "0".into(),
            found: problem.depth,
        });
    }
    gensat(problem, config)
}

/// GENSAT at depth `k ≥ 1`: the first admissible uniform analytic forest,
/// in canonical order, whose system is feasible.
pub fn gensat_k(problem: &Problem, config: &SolverConfig) -> Result<SolveResult, SolverError> {
    if problem.depth == 0 {
        return Err(SolverError::Depth {
            expected: "at least 1".into(),
            found: 0,
        });
    }
    gensat(problem, config)
}

/// Dispatches on the problem depth.
pub fn gensat(problem: &Problem, config: &SolverConfig) -> Result<SolveResult, SolverError> {
    let Prepared {
        constraints,
        forests,
        mut stats,
        reasoner,
    } = prepare(problem, config)?;
    let found = scan(
        &forests,
        config.parallel,
        |f| {
            let sys = System::new(f, &constraints, &reasoner);
            match sys.run(None)? {
                Some((x, _)) => Ok(Some(sys.witness(x, &constraints, &reasoner)?)),
                None => Ok(None),
            }
        },
        Option::is_some,
    )?;
    stats.checked = found.len();
    let witness = found.into_iter().flatten().next();
    Ok(SolveResult {
        status: if witness.is_some() { Status::Sat } else { Status::Unsat },
        witness,
        bounds: None,
        stats,
    })
}

/// The tightest `[lower, upper]` with `lower ≤ Bₖ(query)` and
/// `Plₖ(query) ≤ upper` over every admissible forest and mass satisfying
/// the constraints.
pub fn b_k_inf(problem: &Problem, config: &SolverConfig) -> Result<SolveResult, SolverError> {
    let query = problem.query.clone().ok_or(SolverError::MissingQuery)?;
    let Prepared {
        constraints,
        forests,
        mut stats,
        reasoner,
    } = prepare(problem, config)?;
    type Extremes = Option<((BigRational, Witness), (BigRational, Witness))>;
    let results: Vec<Extremes> = scan(
        &forests,
        config.parallel,
        |f| {
            let sys = System::new(f, &constraints, &reasoner);
            let b = sys.indicator(&b_set(f, &query, &reasoner));
            let pl = sys.indicator(&pl_set(f, &query, &reasoner));
            let Some((lx, lo)) = sys.run(Some((b, Sense::Minimize)))? else {
                return Ok(None);
            };
            let (ux, hi) = sys.run(Some((pl, Sense::Maximize)))?.expect("feasible above");
            Ok(Some((
                (lo.expect("optimal"), sys.witness(lx, &constraints, &reasoner)?),
                (hi.expect("optimal"), sys.witness(ux, &constraints, &reasoner)?),
            )))
        },
        |_| false,
    )?;
    stats.checked = results.len();
    let mut lower: Option<(BigRational, Witness)> = None;
    let mut upper: Option<(BigRational, Witness)> = None;
    for (lo, hi) in results.into_iter().flatten() {
        if lower.as_ref().is_none_or(|l| lo.0 < l.0) {
            lower = Some(lo);
        }
        if upper.as_ref().is_none_or(|u| hi.0 > u.0) {
            upper = Some(hi);
        }
    }
    let bounds = match (lower, upper) {
        (Some((lower, lower_witness)), Some((upper, upper_witness))) => Some(Bounds {
            lower,
            upper,
            lower_witness,
            upper_witness,
        }),
        _ => None,
    };
    Ok(SolveResult {
        status: if bounds.is_some() { Status::Sat } else { Status::Unsat },
        witness: None,
        bounds,
        stats,
    })
}
