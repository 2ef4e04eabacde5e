//! Dimension tables of `ĤH_n(A, _{ν^k}A_1)` and `ĤH^n(A, _{ν^k}A_1)` over a
//! window of integer degrees.
//!
//! Every degree resolves to one direct computation, possibly after a single
//! duality step:
//!
//! * homology, `n ≥ 0`: direct;
//! * homology, `n ≤ -1`: `ĤH_n(ν^k) = ĤH_{-(n+1)}(ν^{-k})`;
//! * cohomology, `n ≥ 1`: direct;
//! * cohomology, `n ≤ 0`: `ĤH^n(B) = ĤH_n(D(B))` with `D(_{ν^k}A_1) = _{ν^{1-k}}A_1`,
//!   followed for `n ≤ -1` by the homology step above, which lands on
//!   `ĤH_{-(n+1)}(ν^{k-1})`.
//!
//! Direct computations are the closed forms, the δ-complex (positive homology
//! of the codimension two algebra with `ν^{-1}` coefficients), the near-zero
//! window (homology in degree 0) and the bar complex (positive degrees).

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::algebra::{nakayama, DiagonalTwist, QciSpec};
use crate::bar::{self, BarWindowRequest, Direction, DEFAULT_BUDGET};
use crate::bimodule::{dual_bimodule, recognize_twist, twisted_bimodule};
use crate::codim2::DeltaComplex;
use crate::error::{Error, Result};
use crate::formulas;
use crate::linalg::ChainComplexWindow;
use crate::near_zero::{enveloping_window, ZeromapsWindow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Homology,
    Cohomology,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Homology => "homology",
            Variant::Cohomology => "cohomology",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homology" => Ok(Variant::Homology),
            "cohomology" => Ok(Variant::Cohomology),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// The coefficient bimodule `_{ν^k}A_1`; `Regular` is `k = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Regular,
    NakayamaPower(i64),
}

impl Coefficient {
    pub fn power(self) -> i64 {
        match self {
            Coefficient::Regular => 0,
            Coefficient::NakayamaPower(k) => k,
        }
    }

    fn from_power(k: i64) -> Self {
        if k == 0 {
            Coefficient::Regular
        } else {
            Coefficient::NakayamaPower(k)
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power() {
            0 => f.write_str("regular"),
            k => write!(f, "nu:{k}"),
        }
    }
}

impl FromStr for Coefficient {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "regular" {
            return Ok(Coefficient::Regular);
        }
        let k = s
            .strip_prefix("nu:")
            .and_then(|k| k.parse::<i64>().ok())
            .ok_or_else(|| Error::Parse(format!("coefficient {s:?} is not `regular` or `nu:K`")))?;
        Ok(Coefficient::from_power(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    Auto,
    BarOnly,
    ComplexOnly,
    FormulaOnly,
}

impl FromStr for Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Policy::Auto),
            "bar" => Ok(Policy::BarOnly),
            "complex" => Ok(Policy::ComplexOnly),
            "formula" => Ok(Policy::FormulaOnly),
            _ => Err(Error::Parse(format!("unknown method policy {s:?}"))),
        }
    }
}

/// A route that computes a dimension without any duality step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseMethod {
    Formula,
    Delta,
    Zeromaps,
    Oracle,
}

impl BaseMethod {
    fn allowed(self, policy: Policy) -> bool {
        match policy {
            Policy::Auto => true,
            Policy::BarOnly => self == BaseMethod::Oracle,
            Policy::ComplexOnly => matches!(self, BaseMethod::Delta | BaseMethod::Zeromaps),
            Policy::FormulaOnly => self == BaseMethod::Formula,
        }
    }
}

impl fmt::Display for BaseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseMethod::Formula => "formula",
            BaseMethod::Delta => "delta",
            BaseMethod::Zeromaps => "zeromaps",
            BaseMethod::Oracle => "oracle",
        })
    }
}

impl FromStr for BaseMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(BaseMethod::Formula),
            "delta" => Ok(BaseMethod::Delta),
            "zeromaps" => Ok(BaseMethod::Zeromaps),
            "oracle" => Ok(BaseMethod::Oracle),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

/// A direct computation: `variant` in `degree` with coefficients `_{ν^power}A_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Task {
    pub variant: Variant,
    pub degree: i64,
    pub power: i64,
}

impl Task {
    /// The direct task a requested degree reduces to, and whether a duality
    /// step was used.
    pub fn reduce(variant: Variant, n: i64, k: i64) -> (Task, bool) {
        let task = |variant, degree, power| Task { variant, degree, power };
        match variant {
            Variant::Homology if n >= 0 => (task(Variant::Homology, n, k), false),
            Variant::Homology => (task(Variant::Homology, -(n + 1), -k), true),
            Variant::Cohomology if n >= 1 => (task(Variant::Cohomology, n, k), false),
            Variant::Cohomology if n == 0 => (task(Variant::Homology, 0, 1 - k), true),
            Variant::Cohomology => (task(Variant::Homology, -(n + 1), k - 1), true),
        }
    }
}

/// The direct computation behind a duality-derived entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Source {
    pub task: Task,
    pub method: BaseMethod,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}|{}|{}|{}",
            self.task.variant,
            self.task.degree,
            Coefficient::from_power(self.task.power),
            self.method
        )
    }
}

impl FromStr for Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        let [variant, degree, coeff, method] = parts[..] else {
            return Err(Error::Parse(format!(
                "source {s:?} is not variant|degree|coefficient|method"
            )));
        };
        Ok(Source {
            task: Task {
                variant: variant.parse()?,
                degree: degree
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?,
                power: coeff.parse::<Coefficient>()?.power(),
            },
            method: method.parse()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    Direct(BaseMethod),
    Duality(Source),
    Unavailable(String),
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::Direct(m) => m.to_string(),
            Method::Duality(_) => "duality".into(),
            Method::Unavailable(_) => "unavailable".into(),
        }
    }

    /// The source column: the duality source, or the reason a value is missing.
    pub fn source_text(&self) -> String {
        match self {
            Method::Direct(_) => String::new(),
            Method::Duality(s) => s.to_string(),
            Method::Unavailable(reason) => reason.clone(),
        }
    }

    pub fn from_parts(label: &str, source: &str) -> Result<Method> {
        match label {
            "duality" => Ok(Method::Duality(source.parse()?)),
            "unavailable" => Ok(Method::Unavailable(source.to_string())),
            other => {
                if !source.is_empty() {
                    return Err(Error::Parse(format!("method {other} takes no source")));
                }
                Ok(Method::Direct(other.parse()?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub degree: i64,
    pub value: Option<usize>,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionTable {
    pub variant: Variant,
    pub coefficient: Coefficient,
    pub entries: Vec<TableEntry>,
}

impl DimensionTable {
    pub fn values(&self) -> Vec<Option<usize>> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn get(&self, degree: i64) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.degree == degree)
    }
}

#[derive(Clone, Debug)]
pub struct TateRequest {
    pub algebra: QciSpec,
    pub n_min: i64,
    pub n_max: i64,
    pub variant: Variant,
    pub coefficient: Coefficient,
    pub policy: Policy,
    pub budget: u128,
}

impl TateRequest {
    pub fn new(algebra: QciSpec, variant: Variant, n_min: i64, n_max: i64) -> Self {
        TateRequest {
            algebra,
            n_min,
            n_max,
            variant,
            coefficient: Coefficient::Regular,
            policy: Policy::Auto,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_coefficient(self, coefficient: Coefficient) -> Self {
        TateRequest { coefficient, ..self }
    }

    pub fn with_policy(self, policy: Policy) -> Self {
        TateRequest { policy, ..self }
    }

    pub fn with_budget(self, budget: u128) -> Self {
        TateRequest { budget, ..self }
    }

    fn check(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::Usage(format!("empty window [{}, {}]", self.n_min, self.n_max)));
        }
        if self.budget == 0 {
            return Err(Error::Usage("budget must be positive".into()));
        }
        Ok(())
    }
}

/// Which closed-form family `A` belongs to, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    CommutativeCi { c: u64, a: u64 },
    Exterior { c: u64 },
    GenericCodim2 { a: u64, b: u64 },
}

fn family(a: &QciSpec) -> Option<Family> {
    let c = a.num_generators();
    let ex = a.exponents();
    let off_diagonal =
        |pred: &dyn Fn(&crate::field::Scalar) -> bool| (0..c).all(|i| (0..c).all(|j| i == j || pred(a.q(i, j))));
    if off_diagonal(&|q| q.is_one()) && ex.iter().all(|&e| e == ex[0]) {
        return Some(Family::CommutativeCi {
            c: c as u64,
            a: ex[0] as u64,
        });
    }
    let minus_one = a.field().from_i64(-1);
    if ex.iter().all(|&e| e == 2) && off_diagonal(&|q| *q == minus_one) {
        return Some(Family::Exterior { c: c as u64 });
    }
    if c == 2 && a.generic_q() {
        return Some(Family::GenericCodim2 {
            a: ex[0] as u64,
            b: ex[1] as u64,
        });
    }
    None
}

/// The closed-form value in any degree, when the coefficients are `A` itself
/// and the algebra belongs to a family with a closed form.
pub fn formula_value(a: &QciSpec, variant: Variant, n: i64, k: i64) -> Option<usize> {
    if !nakayama(a, k).is_identity() {
        return None;
    }
    let p = a.field().characteristic();
    let v = match family(a)? {
        Family::CommutativeCi { c, a } => formulas::ci_dim(c, a, p, n),
        Family::Exterior { c } => formulas::exterior_dim(c, p, n),
        Family::GenericCodim2 { a, b } => match variant {
            Variant::Homology => formulas::codim2_homology_dim(a, b, p, n),
            Variant::Cohomology => formulas::codim2_cohomology_dim(n),
        },
    };
    Some(v as usize)
}

fn delta_applies(a: &QciSpec, task: &Task) -> bool {
    task.variant == Variant::Homology
        && task.degree >= 1
        && a.num_generators() == 2
        && a.generic_q()
        && nakayama(a, task.power) == nakayama(a, -1)
}

/// Methods that can compute `task` directly, in preference order.
fn candidates(a: &QciSpec, task: &Task) -> Vec<BaseMethod> {
    let mut out = Vec::new();
    if formula_value(a, task.variant, task.degree, task.power).is_some() {
        out.push(BaseMethod::Formula);
    }
    if delta_applies(a, task) {
        out.push(BaseMethod::Delta);
    }
    if task.variant == Variant::Homology && task.degree == 0 {
        out.push(BaseMethod::Zeromaps);
    }
    if task.degree >= 1 {
        out.push(BaseMethod::Oracle);
    }
    out
}

fn coefficient_twist(a: &QciSpec, k: i64) -> DiagonalTwist {
    nakayama(a, k)
}

/// The largest `n ≤ want` whose bar window fits the budget.
fn bar_reach(a: &QciSpec, want: i64, budget: u128) -> Option<i64> {
    let (da, db) = (a.dim() as u128, a.dim() as u128);
    (0..=want).rev().find(|&n| {
        da.checked_pow(n as u32 + 1)
            .and_then(|p| p.checked_mul(db))
            .is_some_and(|size| size <= budget)
    })
}

fn bar_dims(a: &QciSpec, variant: Variant, k: i64, n_max: usize, budget: u128) -> Result<Vec<usize>> {
    let id = DiagonalTwist::identity(a.field(), a.num_generators());
    let b = twisted_bimodule(a, &coefficient_twist(a, k), &id)?;
    let req = match variant {
        Variant::Homology => BarWindowRequest::homology(a, &b, n_max),
        Variant::Cohomology => BarWindowRequest::cohomology(a, &b, n_max),
    }
    .with_budget(budget);
    match req.direction {
        Direction::Homology => bar::hh_homology_dims(&req),
        Direction::Cohomology => bar::hh_cohomology_dims(&req),
    }
}

fn resource_error(a: &QciSpec, degree: i64, budget: u128) -> Error {
    let needed = (a.dim() as u128).saturating_pow(degree as u32 + 2);
    Error::Resource {
        degree: degree + 1,
        needed,
        budget,
    }
}

/// Computes direct tasks, batching the bar and δ windows per coefficient.
struct Evaluator<'a> {
    algebra: &'a QciSpec,
    budget: u128,
    values: HashMap<(BaseMethod, Task), std::result::Result<usize, Error>>,
}

impl<'a> Evaluator<'a> {
    fn new(algebra: &'a QciSpec, budget: u128) -> Self {
        Evaluator {
            algebra,
            budget,
            values: HashMap::new(),
        }
    }

    /// Evaluates every `(method, task)` pair. Only hypothesis failures of the
    /// δ route abort; other failures are stored per task.
    fn run(&mut self, jobs: &[(BaseMethod, Task)]) -> Result<()> {
        let a = self.algebra;
        let mut batches: HashMap<(BaseMethod, Variant, i64), i64> = HashMap::new();
        for (m, t) in jobs {
            if self.values.contains_key(&(*m, *t)) {
                continue;
            }
            match m {
                BaseMethod::Formula => {
                    let v = formula_value(a, t.variant, t.degree, t.power)
                        .ok_or_else(|| Error::Usage("no closed form applies".into()));
                    self.values.insert((*m, *t), v);
                }
                BaseMethod::Zeromaps => {
                    let v = ZeromapsWindow::new(a, &coefficient_twist(a, t.power)).map(|w| w.homology_dim());
                    self.values.insert((*m, *t), v);
                }
                BaseMethod::Delta | BaseMethod::Oracle => {
                    let top = batches.entry((*m, t.variant, t.power)).or_insert(t.degree);
                    *top = (*top).max(t.degree);
                }
            }
        }
        let mut keys: Vec<_> = batches.into_iter().collect();
        keys.sort_by_key(|((m, v, k), _)| (*m as u8, *v as u8, *k));
        for ((m, variant, k), top) in keys {
            let task = |degree| Task {
                variant,
                degree,
                power: k,
            };
            match m {
                BaseMethod::Delta => {
                    let window = DeltaComplex::new(a)?.window(top as usize + 1)?;
                    for (n, d) in window.homology_dims() {
                        self.values.insert((m, task(n)), Ok(d));
                    }
                }
                _ => {
                    let reach = bar_reach(a, top, self.budget);
                    if let Some(reach) = reach.filter(|&r| r >= 1) {
                        let dims = bar_dims(a, variant, k, reach as usize, self.budget)?;
                        for (n, d) in dims.into_iter().enumerate().skip(1) {
                            self.values.insert((m, task(n as i64)), Ok(d));
                        }
                    }
                    let first_missing = reach.map_or(1, |r| r.max(0) + 1);
                    for n in first_missing..=top {
                        self.values.insert((m, task(n)), Err(resource_error(a, n, self.budget)));
                    }
                }
            }
        }
        Ok(())
    }

    fn get(&self, m: BaseMethod, t: &Task) -> Option<&std::result::Result<usize, Error>> {
        self.values.get(&(m, *t))
    }
}

/// The dimension table for the requested window.
pub fn tate_dims(req: &TateRequest) -> Result<DimensionTable> {
    req.check()?;
    let a = &req.algebra;
    let k = req.coefficient.power();
    let degrees: Vec<i64> = (req.n_min..=req.n_max).collect();
    let mut dual_checked = false;

    // A closed form answers every degree directly; otherwise reduce first.
    let mut plans: Vec<(i64, Task, bool, Vec<BaseMethod>)> = Vec::with_capacity(degrees.len());
    for &n in &degrees {
        plans.push({
            let direct = Task {
                variant: req.variant,
                degree: n,
                power: k,
            };
            if BaseMethod::Formula.allowed(req.policy) && formula_value(a, req.variant, n, k).is_some() {
                (n, direct, false, vec![BaseMethod::Formula])
            } else {
                let (task, dual) = Task::reduce(req.variant, n, k);
                // Cohomology crosses to homology through the concrete dual.
                if req.variant == Variant::Cohomology && n <= 0 && !dual_checked {
                    check_dual_twist(a, k)?;
                    dual_checked = true;
                }
                let methods = candidates(a, &task)
                    .into_iter()
                    .filter(|m| m.allowed(req.policy))
                    .collect();
                (n, task, dual, methods)
            }
        });
    }

    if req.policy == Policy::ComplexOnly {
        for (_, task, _, _) in &plans {
            let wants_delta = task.variant == Variant::Homology && task.degree >= 1 && a.num_generators() == 2;
            if wants_delta && nakayama(a, task.power) == nakayama(a, -1) {
                DeltaComplex::new(a)?;
            }
        }
    }

    let jobs: Vec<(BaseMethod, Task)> = plans
        .iter()
        .flat_map(|(_, task, _, methods)| methods.iter().map(move |m| (*m, *task)))
        .collect();
    let mut eval = Evaluator::new(a, req.budget);
    eval.run(&jobs)?;

    let entries = plans
        .into_iter()
        .map(|(n, task, dual, methods)| {
            let mut failure = None;
            for m in &methods {
                match eval.get(*m, &task) {
                    Some(Ok(v)) => {
                        let method = if dual {
                            Method::Duality(Source { task, method: *m })
                        } else {
                            Method::Direct(*m)
                        };
                        return TableEntry {
                            degree: n,
                            value: Some(*v),
                            method,
                        };
                    }
                    Some(Err(e)) => failure = failure.or_else(|| Some(e.to_string())),
                    None => {}
                }
            }
            let reason = failure.unwrap_or_else(|| {
                format!(
                    "no permitted method for {}|{}|{}",
                    task.variant,
                    task.degree,
                    Coefficient::from_power(task.power)
                )
            });
            TableEntry {
                degree: n,
                value: None,
                method: Method::Unavailable(reason),
            }
        })
        .collect();

    Ok(DimensionTable {
        variant: req.variant,
        coefficient: req.coefficient,
        entries,
    })
}

/// Checks that the concrete dual of `_{ν^k}A_1` is recognized as `_{ν^{1-k}}A_1`.
pub fn check_dual_twist(a: &QciSpec, k: i64) -> Result<()> {
    let id = DiagonalTwist::identity(a.field(), a.num_generators());
    let b = twisted_bimodule(a, &nakayama(a, k), &id)?;
    let expected = nakayama(a, 1 - k);
    match recognize_twist(a, &dual_bimodule(&b))? {
        Some(psi) if psi == expected => Ok(()),
        Some(psi) => Err(Error::Consistency(format!(
            "D(_{{nu^{k}}}A_1) is twisted by {psi}, expected {expected}"
        ))),
        None => Err(Error::Consistency(format!(
            "D(_{{nu^{k}}}A_1) is not a one-sided twist of A"
        ))),
    }
}

/// One route attempted by [`cross_validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub route: String,
    pub value: std::result::Result<usize, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub degree: i64,
    pub attempts: Vec<Attempt>,
    pub agree: bool,
    pub dumps: Vec<PathBuf>,
}

/// Every route that applies to `task`, including the alternative side of the
/// tensor/Hom duality in positive degrees and the `A^e` picture in degree 0.
fn routes(a: &QciSpec, task: &Task) -> Vec<(String, Route)> {
    let mut out: Vec<(String, Route)> = candidates(a, task)
        .into_iter()
        .map(|m| (Source { task: *task, method: m }.to_string(), Route::Base(m, *task)))
        .collect();
    if task.degree >= 1 {
        let other = Task {
            variant: match task.variant {
                Variant::Homology => Variant::Cohomology,
                Variant::Cohomology => Variant::Homology,
            },
            degree: task.degree,
            power: 1 - task.power,
        };
        out.push((
            Source {
                task: other,
                method: BaseMethod::Oracle,
            }
            .to_string(),
            Route::Base(BaseMethod::Oracle, other),
        ));
    }
    if task.variant == Variant::Homology && task.degree == 0 {
        out.push((
            format!("homology|0|{}|enveloping", Coefficient::from_power(task.power)),
            Route::Enveloping(task.power),
        ));
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Route {
    Base(BaseMethod, Task),
    Enveloping(i64),
}

fn route_window(a: &QciSpec, route: Route, budget: u128) -> Result<Option<ChainComplexWindow>> {
    let id = DiagonalTwist::identity(a.field(), a.num_generators());
    Ok(match route {
        Route::Base(BaseMethod::Zeromaps, t) => {
            let w = ZeromapsWindow::new(a, &nakayama(a, t.power))?;
            Some(enveloping_window(a, &twisted_bimodule(a, w.twist(), &id)?)?)
        }
        Route::Enveloping(k) => Some(enveloping_window(a, &twisted_bimodule(a, &nakayama(a, k), &id)?)?),
        Route::Base(BaseMethod::Delta, t) => Some(DeltaComplex::new(a)?.window(t.degree as usize + 1)?),
        Route::Base(BaseMethod::Oracle, t) => {
            let b = twisted_bimodule(a, &nakayama(a, t.power), &id)?;
            let req = match t.variant {
                Variant::Homology => BarWindowRequest::homology(a, &b, t.degree as usize),
                Variant::Cohomology => BarWindowRequest::cohomology(a, &b, t.degree as usize),
            }
            .with_budget(budget);
            Some(bar::bar_window(&req)?)
        }
        Route::Base(BaseMethod::Formula, _) => None,
    })
}

fn dump_window(w: &ChainComplexWindow, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let io = |e: std::io::Error| Error::Usage(format!("cannot write dump: {e}"));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut paths = Vec::new();
    for n in (w.bottom_degree() + 1..=w.top_degree()).rev() {
        let Some(m) = w.map_from(n) else { continue };
        let path = dir.join(format!("{stem}_d{n}.txt"));
        m.write_coordinate(BufWriter::new(File::create(&path).map_err(io)?))
            .map_err(io)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Runs every applicable route per degree and compares the values. On a
/// disagreement the differentials of each route are written under `dump_dir`.
pub fn cross_validate(req: &TateRequest, dump_dir: Option<&Path>) -> Result<Vec<CrossCheck>> {
    req.check()?;
    let a = &req.algebra;
    let k = req.coefficient.power();
    let mut out = Vec::new();
    for n in req.n_min..=req.n_max {
        let mut attempts = Vec::new();
        let mut tried: Vec<Route> = Vec::new();
        if let Some(v) = formula_value(a, req.variant, n, k) {
            attempts.push(Attempt {
                route: format!("{}|{n}|{}|formula", req.variant, req.coefficient),
                value: Ok(v),
            });
        }
        let (task, _) = Task::reduce(req.variant, n, k);
        for (label, route) in routes(a, &task) {
            let value = match route {
                Route::Base(m, t) => {
                    let mut eval = Evaluator::new(a, req.budget);
                    match eval.run(&[(m, t)]) {
                        Ok(()) => eval
                            .get(m, &t)
                            .cloned()
                            .unwrap_or(Err(Error::Usage("not computed".into()))),
                        Err(e) => Err(e),
                    }
                }
                Route::Enveloping(p) => {
                    let id = DiagonalTwist::identity(a.field(), a.num_generators());
                    twisted_bimodule(a, &nakayama(a, p), &id).and_then(|b| crate::near_zero::tate_hh0_bimodule(a, &b))
                }
            };
            attempts.push(Attempt {
                route: label,
                value: value.map_err(|e| e.to_string()),
            });
            tried.push(route);
        }
        let ok: Vec<usize> = attempts.iter().filter_map(|t| t.value.clone().ok()).collect();
        let agree = !ok.is_empty() && ok.iter().all(|v| *v == ok[0]);
        let mut dumps = Vec::new();
        if let (false, Some(dir)) = (agree, dump_dir) {
            for (i, route) in tried.iter().enumerate() {
                if let Ok(Some(w)) = route_window(a, *route, req.budget) {
                    dumps.extend(dump_window(&w, dir, &format!("deg{n}_route{i}"))?);
                }
            }
        }
        out.push(CrossCheck {
            degree: n,
            attempts,
            agree,
            dumps,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn codim2(a: usize, b: usize, q: i64) -> QciSpec {
        QciSpec::codim2(FieldSpec::Rational, a, b, FieldSpec::Rational.from_i64(q)).unwrap()
    }

    fn values(t: &DimensionTable) -> Vec<usize> {
        t.values().into_iter().map(|v| v.expect("available")).collect()
    }

    #[test]
    fn reductions_take_one_step() {
        use Variant::*;
        assert_eq!(
            Task::reduce(Homology, 2, 1),
            (
                Task {
                    variant: Homology,
                    degree: 2,
                    power: 1
                },
                false
            )
        );
        assert_eq!(
            Task::reduce(Homology, -3, 1),
            (
                Task {
                    variant: Homology,
                    degree: 2,
                    power: -1
                },
                true
            )
        );
        assert_eq!(
            Task::reduce(Cohomology, 0, 0),
            (
                Task {
                    variant: Homology,
                    degree: 0,
                    power: 1
                },
                true
            )
        );
        assert_eq!(
            Task::reduce(Cohomology, -1, 0),
            (
                Task {
                    variant: Homology,
                    degree: 0,
                    power: -1
                },
                true
            )
        );
        assert_eq!(
            Task::reduce(Cohomology, -4, 2),
            (
                Task {
                    variant: Homology,
                    degree: 3,
                    power: 1
                },
                true
            )
        );
    }

    #[test]
    fn codim2_cohomology_table() {
        for policy in [Policy::Auto, Policy::ComplexOnly, Policy::FormulaOnly] {
            let req = TateRequest::new(codim2(2, 2, 2), Variant::Cohomology, -4, 4).with_policy(policy);
            let t = tate_dims(&req).unwrap();
            // 1, 2, 1 sit at degrees 0, 1, 2.
            let expected = [0, 0, 0, 0, 1, 2, 1, 0, 0];
            for (e, want) in t.entries.iter().zip(expected) {
                if let Some(v) = e.value {
                    assert_eq!(v, want, "{policy:?} degree {}", e.degree);
                } else {
                    // Positive cohomology has no complex route.
                    assert!(policy == Policy::ComplexOnly && e.degree >= 1);
                }
            }
        }
    }

    #[test]
    fn codim2_cohomology_table_without_formulas() {
        let req = TateRequest::new(codim2(2, 2, 2), Variant::Cohomology, -4, 3).with_policy(Policy::BarOnly);
        let t = tate_dims(&req).unwrap();
        // Degrees 0 and -1 need the near-zero window, which bar_only excludes.
        let got: Vec<Option<usize>> = t.values();
        assert_eq!(
            got,
            vec![Some(0), Some(0), Some(0), None, None, Some(2), Some(1), Some(0)]
        );
    }

    #[test]
    fn codim2_homology_table() {
        let t = tate_dims(&TateRequest::new(codim2(2, 3, 2), Variant::Homology, -3, 3)).unwrap();
        assert_eq!(values(&t), vec![3; 7]);
        assert!(t
            .entries
            .iter()
            .all(|e| e.method == Method::Direct(BaseMethod::Formula)));
    }

    #[test]
    fn exterior_table() {
        let a = QciSpec::exterior(FieldSpec::prime(3).unwrap(), 2).unwrap();
        for policy in [Policy::Auto, Policy::BarOnly] {
            let req = TateRequest::new(a.clone(), Variant::Homology, -3, 2).with_policy(policy);
            let t = tate_dims(&req).unwrap();
            let want = [6, 4, 2, 2, 4, 6];
            for (e, w) in t.entries.iter().zip(want) {
                match policy {
                    Policy::BarOnly if e.degree == 0 || e.degree == -1 => assert_eq!(e.value, None),
                    _ => assert_eq!(e.value, Some(w), "{policy:?} degree {}", e.degree),
                }
            }
        }
    }

    #[test]
    fn duality_entries_record_direct_sources() {
        let req = TateRequest::new(codim2(2, 2, 2), Variant::Cohomology, -3, 2).with_policy(Policy::ComplexOnly);
        let t = tate_dims(&req).unwrap();
        let e = t.get(-1).unwrap();
        let Method::Duality(src) = &e.method else {
            panic!("{e:?}")
        };
        assert_eq!(src.to_string(), "homology|0|nu:-1|zeromaps");
        let e = t.get(-3).unwrap();
        assert_eq!(e.method.source_text(), "homology|2|nu:-1|delta");
        assert_eq!(
            Method::from_parts("duality", "homology|2|nu:-1|delta").unwrap(),
            e.method
        );
    }

    #[test]
    fn budget_marks_entries_unavailable() {
        let a = QciSpec::exterior(FieldSpec::Rational, 3).unwrap();
        let req = TateRequest::new(a, Variant::Homology, 0, 4)
            .with_policy(Policy::BarOnly)
            .with_budget(40_000);
        let t = tate_dims(&req).unwrap();
        // Degree 3 needs 8 * 8^4 entries, degree 4 needs 8 * 8^5.
        assert_eq!(t.values(), vec![None, Some(12), Some(24), Some(40), None]);
        assert!(t.get(4).unwrap().method.source_text().contains("budget"));
    }

    #[test]
    fn complex_only_at_root_of_unity_is_hypothesis_error() {
        let req = TateRequest::new(codim2(2, 2, -1), Variant::Homology, -3, 2)
            .with_coefficient(Coefficient::NakayamaPower(-1))
            .with_policy(Policy::ComplexOnly);
        assert!(matches!(tate_dims(&req), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn dual_twists_are_recognized() {
        for k in -2..=2 {
            check_dual_twist(&codim2(3, 2, 2), k).unwrap();
            check_dual_twist(&QciSpec::exterior(FieldSpec::Rational, 2).unwrap(), k).unwrap();
        }
    }

    #[test]
    fn cross_validation_agrees() {
        let a = codim2(2, 2, 2);
        let req = TateRequest::new(a, Variant::Cohomology, -3, 3);
        for check in cross_validate(&req, None).unwrap() {
            assert!(check.agree, "{check:?}");
            assert!(
                check.attempts.len() >= 2 || check.degree == 0 || check.degree == -1,
                "{check:?}"
            );
        }
        let a = QciSpec::exterior(FieldSpec::prime(2).unwrap(), 2).unwrap();
        let req = TateRequest::new(a, Variant::Homology, 0, 0);
        let check = &cross_validate(&req, None).unwrap()[0];
        assert!(check.agree);
        assert!(check.attempts.iter().all(|t| t.value == Ok(4)));
    }

    #[test]
    fn cohomology_is_palindromic_when_nu_squares_to_one() {
        let a = QciSpec::exterior(FieldSpec::Rational, 2).unwrap();
        assert!(nakayama(&a, 2).is_identity());
        let req = TateRequest::new(a, Variant::Cohomology, -4, 3);
        // Only degrees 0 and -1 here: the δ route would reject q = -1.
        let near = tate_dims(
            &TateRequest {
                n_min: -1,
                n_max: 0,
                ..req.clone()
            }
            .with_policy(Policy::ComplexOnly),
        )
        .unwrap();
        let bar = tate_dims(&req.with_policy(Policy::BarOnly)).unwrap();
        let value = |n: i64| bar.get(n).unwrap().value.or_else(|| near.get(n)?.value).unwrap();
        for n in 0..=3 {
            assert_eq!(value(n), value(-(n + 1)), "n={n}");
        }
    }

    #[test]
    fn coefficient_text() {
        assert_eq!("nu:-2".parse::<Coefficient>().unwrap(), Coefficient::NakayamaPower(-2));
        assert_eq!("nu:0".parse::<Coefficient>().unwrap(), Coefficient::Regular);
        assert_eq!(Coefficient::NakayamaPower(3).to_string(), "nu:3");
        assert!("nu".parse::<Coefficient>().is_err());
    }
}
