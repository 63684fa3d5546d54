//! Columnar evaluation of a specification over sensor data.
//!
//! Every artifact is evaluated whole-column-at-a-time on a shared grid and
//! memoized, so a function referenced by five rules is computed once. Each
//! evaluated artifact becomes a virtual sensor; with
//! [`EvalOptions::record_subexpressions`] every composite sub-expression is
//! kept as well, named by its position in the expression tree
//! (`Rule1/0/1` is the second child of the first child of `Rule1`'s body),
//! which is what drill-down plots and violation excerpts feed on.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::lang::{
    build_dependency_graph, ArtifactDef, ArtifactKind, BinOp, CharacteristicDef, Expr, ExprKind,
    FunctionDef, LibFn, MetricDef, RuleDef, Specification, TimeRoutineDef,
};
use crate::timeseries::{
    LogicSample, NumericSample, SeriesKind, SeriesValues, TimeGrid, TimeSeries,
};

use super::envelope::Envelope;
use super::metric::{eval_metric, MetricResult};
use super::routine::eval_time_routine;
use super::{arith, logic, EvalError};

/// A named series produced by evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirtualSensor {
    pub name: String,
    pub series: TimeSeries,
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Record every composite sub-expression as its own virtual sensor.
    pub record_subexpressions: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { record_subexpressions: true }
    }
}

/// Everything a run produced.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalResults {
    pub grid: TimeGrid,
    /// Artifact outputs plus recorded sub-expressions, keyed by name.
    pub virtual_sensors: BTreeMap<String, VirtualSensor>,
    pub metrics: BTreeMap<String, MetricResult>,
    /// How many times each artifact's definition was actually computed;
    /// stays at 1 per artifact thanks to memoization.
    pub eval_counts: BTreeMap<String, usize>,
}

impl EvalResults {
    pub fn series(&self, name: &str) -> Option<&TimeSeries> {
        self.virtual_sensors.get(name).map(|v| &v.series)
    }

    pub fn logic_samples(&self, name: &str) -> Option<&[LogicSample]> {
        self.series(name).and_then(|s| s.logic_samples())
    }

    pub fn numeric_samples(&self, name: &str) -> Option<&[NumericSample]> {
        self.series(name).and_then(|s| s.numeric_samples())
    }
}

struct Scope<'s> {
    artifact: &'s str,
    context: &'s [String],
}

pub struct Evaluator<'a> {
    spec: &'a Specification,
    data: &'a BTreeMap<String, TimeSeries>,
    grid: TimeGrid,
    options: EvalOptions,
    cache: BTreeMap<String, TimeSeries>,
    metrics: BTreeMap<String, MetricResult>,
    recorded: BTreeMap<String, VirtualSensor>,
    counts: BTreeMap<String, usize>,
    failed: BTreeMap<String, EvalError>,
    in_progress: BTreeSet<String>,
}

impl<'a> Evaluator<'a> {
    /// All series in `data` must live on `grid`; align them first.
    pub fn new(
        spec: &'a Specification,
        data: &'a BTreeMap<String, TimeSeries>,
        grid: TimeGrid,
        options: EvalOptions,
    ) -> Result<Self, EvalError> {
        for (name, series) in data {
            if series.grid() != &grid {
                return Err(EvalError::GridMismatch(name.clone()));
            }
        }
        Ok(Evaluator {
            spec,
            data,
            grid,
            options,
            cache: BTreeMap::new(),
            metrics: BTreeMap::new(),
            recorded: BTreeMap::new(),
            counts: BTreeMap::new(),
            failed: BTreeMap::new(),
            in_progress: BTreeSet::new(),
        })
    }

    /// Evaluate one artifact (and, transitively, whatever it references).
    /// Results are memoized; repeated calls are free. A failure is memoized
    /// too and resurfaces on every later request for the same name.
    pub fn eval_artifact(&mut self, name: &str) -> Result<(), EvalError> {
        if self.cache.contains_key(name) || self.metrics.contains_key(name) {
            return Ok(());
        }
        if let Some(err) = self.failed.get(name) {
            return Err(err.clone());
        }
        if !self.in_progress.insert(name.to_string()) {
            return Err(EvalError::Cycle(name.to_string()));
        }
        let result = self.compute(name);
        self.in_progress.remove(name);
        if let Err(err) = &result {
            self.failed.insert(name.to_string(), err.clone());
        }
        result
    }

    pub fn into_results(self) -> EvalResults {
        let mut virtual_sensors = self.recorded;
        for (name, series) in self.cache {
            virtual_sensors.insert(name.clone(), VirtualSensor { name, series });
        }
        EvalResults {
            grid: self.grid,
            virtual_sensors,
            metrics: self.metrics,
            eval_counts: self.counts,
        }
    }

    fn compute(&mut self, name: &str) -> Result<(), EvalError> {
        let artifact = self
            .spec
            .find_artifact(name)
            .ok_or_else(|| EvalError::UnknownReference(name.to_string()))?;
        *self.counts.entry(name.to_string()).or_insert(0) += 1;
        match artifact {
            ArtifactDef::Rule(r) => self.compute_rule(r),
            ArtifactDef::Function(f) => self.compute_function(f),
            ArtifactDef::Metric(m) => self.compute_metric(m),
            ArtifactDef::TimeRoutine(tr) => self.compute_routine(tr),
            ArtifactDef::Characteristic(c) => self.compute_characteristic(c),
        }
    }

    fn compute_rule(&mut self, rule: &RuleDef) -> Result<(), EvalError> {
        let scope = Scope { artifact: &rule.name, context: &rule.context };
        let col = self.eval_expr(&scope, &rule.body, &mut Vec::new())?;
        let mut samples = logic_column(&rule.name, col)?;
        // A rule with context sensors reports "no information" wherever all
        // of its context was missing, whatever its body would say there.
        if !rule.context.is_empty() {
            let ctx: Vec<&TimeSeries> = rule
                .context
                .iter()
                .map(|c| self.sensor_series(c))
                .collect::<Result<_, _>>()?;
            for (k, s) in samples.iter_mut().enumerate() {
                if ctx.iter().all(|series| series.is_missing(k)) {
                    *s = LogicSample::Missing;
                }
            }
        }
        self.install(&rule.name, SeriesValues::Logic(samples));
        Ok(())
    }

    fn compute_function(&mut self, func: &FunctionDef) -> Result<(), EvalError> {
        let scope = Scope { artifact: &func.name, context: &func.context };
        let col = self.eval_expr(&scope, &func.body, &mut Vec::new())?;
        let samples = numeric_column(&func.name, col)?;
        self.install(&func.name, SeriesValues::Numeric(samples));
        Ok(())
    }

    fn compute_routine(&mut self, def: &TimeRoutineDef) -> Result<(), EvalError> {
        for dep in def.includes.iter().chain(&def.excludes) {
            self.eval_artifact(dep)?;
        }
        let series = {
            let includes = routine_slices(&self.cache, &def.includes)?;
            let excludes = routine_slices(&self.cache, &def.excludes)?;
            eval_time_routine(def, self.grid, &includes, &excludes)
        };
        self.cache.insert(def.name.clone(), series);
        Ok(())
    }

    fn compute_characteristic(&mut self, def: &CharacteristicDef) -> Result<(), EvalError> {
        let xs = numeric_sensor(self.sensor_series(&def.x_sensor)?, &def.x_sensor)?;
        let ys = numeric_sensor(self.sensor_series(&def.y_sensor)?, &def.y_sensor)?;
        let env = Envelope::from_def(def);
        let samples: Vec<LogicSample> =
            xs.iter().zip(ys).map(|(&x, &y)| env.check(x, y)).collect();
        self.install(&def.name, SeriesValues::Logic(samples));
        Ok(())
    }

    fn compute_metric(&mut self, def: &MetricDef) -> Result<(), EvalError> {
        // The metric context is a numeric sensor, or failing that a numeric
        // artifact (a function), mirroring reference resolution elsewhere.
        let samples: Vec<NumericSample> = if let Some(series) = self.data.get(&def.context) {
            numeric_sensor(series, &def.context)?.to_vec()
        } else if let Some(kind) = self.spec.artifact_kind(&def.context) {
            if kind == ArtifactKind::Metric {
                return Err(EvalError::MetricReference(def.context.clone()));
            }
            self.eval_artifact(&def.context)?;
            let series = &self.cache[&def.context];
            numeric_sensor(series, &def.context)?.to_vec()
        } else {
            return Err(EvalError::UnknownReference(def.context.clone()));
        };
        let result = eval_metric(&def.name, &def.base, def.filter, &self.grid, &samples)?;
        self.metrics.insert(def.name.clone(), result);
        Ok(())
    }

    fn sensor_series(&self, name: &str) -> Result<&'a TimeSeries, EvalError> {
        self.data.get(name).ok_or_else(|| EvalError::MissingData(name.to_string()))
    }

    fn install(&mut self, name: &str, values: SeriesValues) {
        let series = TimeSeries::new(self.grid, values).expect("one sample per grid position");
        self.cache.insert(name.to_string(), series);
    }

    fn record(&mut self, scope: &Scope, path: &[usize], col: &SeriesValues) {
        if !self.options.record_subexpressions || path.is_empty() {
            return;
        }
        let mut name = scope.artifact.to_string();
        for p in path {
            name.push('/');
            name.push_str(&p.to_string());
        }
        let series = TimeSeries::new(self.grid, col.clone()).expect("column matches grid");
        self.recorded.insert(name.clone(), VirtualSensor { name, series });
    }

    fn resolve_ref(&mut self, scope: &Scope, name: &str) -> Result<SeriesValues, EvalError> {
        if scope.context.iter().any(|c| c == name) {
            return Ok(self.sensor_series(name)?.values().clone());
        }
        match self.spec.artifact_kind(name) {
            Some(ArtifactKind::Metric) => Err(EvalError::MetricReference(name.to_string())),
            Some(_) => {
                self.eval_artifact(name)?;
                Ok(self.cache[name].values().clone())
            }
            None => Err(EvalError::UnknownReference(name.to_string())),
        }
    }

    fn eval_expr(
        &mut self,
        scope: &Scope,
        expr: &Expr,
        path: &mut Vec<usize>,
    ) -> Result<SeriesValues, EvalError> {
        let n = self.grid.count();
        let col = match &expr.kind {
            ExprKind::Number(v) => SeriesValues::Numeric(vec![NumericSample::from_value(*v); n]),
            ExprKind::Bool(b) => SeriesValues::Logic(vec![LogicSample::from_bool(*b); n]),
            ExprKind::Ref(name) => self.resolve_ref(scope, name)?,
            ExprKind::Not(inner) => {
                let v = logic_column(scope.artifact, self.eval_child(scope, 0, inner, path)?)?;
                SeriesValues::Logic(v.into_iter().map(|s| !s).collect())
            }
            ExprKind::Binary(op, a, b) => {
                let left = self.eval_child(scope, 0, a, path)?;
                let right = self.eval_child(scope, 1, b, path)?;
                apply_binary(scope.artifact, *op, left, right)?
            }
            ExprKind::IfThenElse { cond, then, otherwise } => {
                let c = logic_column(scope.artifact, self.eval_child(scope, 0, cond, path)?)?;
                let t = self.eval_child(scope, 1, then, path)?;
                let e = match otherwise {
                    Some(e) => self.eval_child(scope, 2, e, path)?,
                    // An omitted alternative is vacuous truth.
                    None => SeriesValues::Logic(vec![LogicSample::True; n]),
                };
                match (t, e) {
                    (SeriesValues::Logic(t), SeriesValues::Logic(e)) => SeriesValues::Logic(
                        izip3(c, t, e).map(|(c, t, e)| logic::ite(c, t, e)).collect(),
                    ),
                    (SeriesValues::Numeric(t), SeriesValues::Numeric(e)) => {
                        SeriesValues::Numeric(
                            izip3(c, t, e).map(|(c, t, e)| arith::ite(c, t, e)).collect(),
                        )
                    }
                    _ => {
                        return Err(EvalError::ExpectedKind {
                            artifact: scope.artifact.to_string(),
                            expected: SeriesKind::Logic,
                        })
                    }
                }
            }
            ExprKind::Call(f, args) => {
                let mut columns = Vec::with_capacity(args.len());
                for (i, a) in args.iter().enumerate() {
                    columns
                        .push(numeric_column(scope.artifact, self.eval_child(scope, i, a, path)?)?);
                }
                SeriesValues::Numeric(apply_call(*f, columns))
            }
        };
        if matches!(
            expr.kind,
            ExprKind::Not(_)
                | ExprKind::Binary(..)
                | ExprKind::IfThenElse { .. }
                | ExprKind::Call(..)
        ) {
            self.record(scope, path, &col);
        }
        Ok(col)
    }

    fn eval_child(
        &mut self,
        scope: &Scope,
        index: usize,
        expr: &Expr,
        path: &mut Vec<usize>,
    ) -> Result<SeriesValues, EvalError> {
        path.push(index);
        let col = self.eval_expr(scope, expr, path);
        path.pop();
        col
    }
}

fn apply_binary(
    artifact: &str,
    op: BinOp,
    left: SeriesValues,
    right: SeriesValues,
) -> Result<SeriesValues, EvalError> {
    use BinOp::*;
    Ok(match op {
        And | Or | Implies => {
            let a = logic_column(artifact, left)?;
            let b = logic_column(artifact, right)?;
            let f: fn(LogicSample, LogicSample) -> LogicSample = match op {
                And => |x, y| x & y,
                Or => |x, y| x | y,
                _ => logic::implies,
            };
            SeriesValues::Logic(zip2(a, b, f))
        }
        Lt | Le | Gt | Ge | Eq | Ne => {
            let a = numeric_column(artifact, left)?;
            let b = numeric_column(artifact, right)?;
            let f: fn(NumericSample, NumericSample) -> LogicSample = match op {
                Lt => arith::lt,
                Le => arith::le,
                Gt => arith::gt,
                Ge => arith::ge,
                Eq => arith::eq,
                _ => arith::ne,
            };
            SeriesValues::Logic(zip2(a, b, f))
        }
        Add | Sub | Mul | Div => {
            let a = numeric_column(artifact, left)?;
            let b = numeric_column(artifact, right)?;
            let f: fn(NumericSample, NumericSample) -> NumericSample = match op {
                Add => |x, y| x + y,
                Sub => |x, y| x - y,
                Mul => |x, y| x * y,
                _ => |x, y| x / y,
            };
            SeriesValues::Numeric(zip2(a, b, f))
        }
    })
}

fn routine_slices<'c>(
    cache: &'c BTreeMap<String, TimeSeries>,
    names: &[String],
) -> Result<Vec<&'c [LogicSample]>, EvalError> {
    names
        .iter()
        .map(|n| {
            let series = cache.get(n).ok_or_else(|| EvalError::UnknownReference(n.clone()))?;
            series.logic_samples().ok_or_else(|| EvalError::WrongKind {
                name: n.clone(),
                expected: SeriesKind::Logic,
                found: series.kind(),
            })
        })
        .collect()
}

fn logic_column(artifact: &str, v: SeriesValues) -> Result<Vec<LogicSample>, EvalError> {
    match v {
        SeriesValues::Logic(xs) => Ok(xs),
        SeriesValues::Numeric(_) => Err(EvalError::ExpectedKind {
            artifact: artifact.to_string(),
            expected: SeriesKind::Logic,
        }),
    }
}

fn numeric_column(artifact: &str, v: SeriesValues) -> Result<Vec<NumericSample>, EvalError> {
    match v {
        SeriesValues::Numeric(xs) => Ok(xs),
        SeriesValues::Logic(_) => Err(EvalError::ExpectedKind {
            artifact: artifact.to_string(),
            expected: SeriesKind::Numeric,
        }),
    }
}

fn numeric_sensor<'s>(
    series: &'s TimeSeries,
    name: &str,
) -> Result<&'s [NumericSample], EvalError> {
    series.numeric_samples().ok_or_else(|| EvalError::WrongKind {
        name: name.to_string(),
        expected: SeriesKind::Numeric,
        found: series.kind(),
    })
}

fn zip2<T: Copy, U>(a: Vec<T>, b: Vec<T>, f: impl Fn(T, T) -> U) -> Vec<U> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn izip3<A, B, C>(a: Vec<A>, b: Vec<B>, c: Vec<C>) -> impl Iterator<Item = (A, B, C)> {
    a.into_iter().zip(b.into_iter().zip(c)).map(|(x, (y, z))| (x, y, z))
}

/// Per-timestamp library calls over ≥1 numeric columns, with the usual
/// absence propagation.
fn apply_call(f: LibFn, columns: Vec<Vec<NumericSample>>) -> Vec<NumericSample> {
    let arg_count = columns.len() as f64;
    let mut iter = columns.into_iter();
    let mut acc = iter.next().expect("call arity checked at parse time");
    let g: fn(NumericSample, NumericSample) -> NumericSample = match f {
        LibFn::Maximum => |x, y| match (x.value(), y.value()) {
            (Some(a), Some(b)) => NumericSample::from_value(a.max(b)),
            // Reuse arithmetic propagation for the absent states.
            _ => x + y,
        },
        LibFn::Sum | LibFn::Average => |x, y| x + y,
    };
    for col in iter {
        acc = zip2(acc, col, g);
    }
    if f == LibFn::Average {
        let n = NumericSample::Value(arg_count);
        acc = acc.into_iter().map(|x| x / n).collect();
    }
    acc
}

/// Evaluate every artifact of a validated specification, strictly: the
/// first failure aborts. Artifacts are visited in dependency order.
pub fn evaluate_all(
    spec: &Specification,
    data: &BTreeMap<String, TimeSeries>,
    grid: TimeGrid,
) -> Result<EvalResults, EvalError> {
    let order = build_dependency_graph(spec)
        .topo_order()
        .map_err(|cycle| EvalError::Cycle(cycle.join(" -> ")))?;
    let mut ev = Evaluator::new(spec, data, grid, EvalOptions::default())?;
    for name in &order {
        ev.eval_artifact(name)?;
    }
    Ok(ev.into_results())
}

/// Evaluate every artifact, pressing on past failures; broken artifacts are
/// returned with their error instead of aborting the run.
pub fn evaluate_tolerant(
    spec: &Specification,
    data: &BTreeMap<String, TimeSeries>,
    grid: TimeGrid,
    options: EvalOptions,
) -> Result<(EvalResults, BTreeMap<String, EvalError>), EvalError> {
    let mut ev = Evaluator::new(spec, data, grid, options)?;
    let mut failures = BTreeMap::new();
    for artifact in &spec.artifacts {
        let name = artifact.name();
        if let Err(err) = ev.eval_artifact(name) {
            failures.insert(name.to_string(), err);
        }
    }
    Ok((ev.into_results(), failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_spec;
    use crate::timeseries::Timestamp;

    fn grid(count: usize) -> TimeGrid {
        TimeGrid::new(Timestamp::parse("2010-05-01T00:00:00").unwrap(), 900, count).unwrap()
    }

    fn numeric(g: TimeGrid, values: &[f64]) -> TimeSeries {
        TimeSeries::numeric(g, values.iter().map(|&v| NumericSample::Value(v)).collect())
            .unwrap()
    }

    fn logic_series(g: TimeGrid, values: &[LogicSample]) -> TimeSeries {
        TimeSeries::logic(g, values.to_vec()).unwrap()
    }

    #[test]
    fn function_column_arithmetic() {
        let spec = parse_spec(
            "sensor s1 numeric\nsensor s2 numeric\nfunction f context(s1, s2) { (s1 + s2) / 100 }",
        )
        .unwrap();
        let g = grid(3);
        let mut data = BTreeMap::new();
        data.insert("s1".to_string(), numeric(g, &[16.0, 15.8, 15.5]));
        data.insert("s2".to_string(), numeric(g, &[19.2, 19.2, 19.1]));
        let results = evaluate_all(&spec, &data, g).unwrap();
        let out = results.numeric_samples("f").unwrap();
        let expect = [0.352, 0.35, 0.346];
        for (s, e) in out.iter().zip(expect) {
            assert!((s.value().unwrap() - e).abs() < 5e-4, "{s} vs {e}");
        }
    }

    #[test]
    fn rule_thresholds_and_subexpression_names() {
        let spec = parse_spec(
            "sensor a numeric\nsensor b logic\nrule R context(a, b) { b AND NOT (a > 5) }",
        )
        .unwrap();
        let g = grid(3);
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(g, &[3.0, 9.0, 4.0]));
        data.insert(
            "b".to_string(),
            logic_series(g, &[LogicSample::True, LogicSample::True, LogicSample::False]),
        );
        let results = evaluate_all(&spec, &data, g).unwrap();
        use LogicSample::{False, True};
        assert_eq!(results.logic_samples("R").unwrap(), [True, False, False]);
        // Composite children are recorded by position: NOT at 1, the
        // comparison it negates at 1/0. Leaves are not recorded.
        assert_eq!(results.logic_samples("R/1").unwrap(), [True, False, True]);
        assert_eq!(results.logic_samples("R/1/0").unwrap(), [False, True, False]);
        assert!(results.series("R/0").is_none());
    }

    #[test]
    fn subexpression_recording_can_be_disabled() {
        let spec =
            parse_spec("sensor a numeric\nrule R context(a) { NOT (a > 5) }").unwrap();
        let g = grid(1);
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(g, &[1.0]));
        let mut ev = Evaluator::new(
            &spec,
            &data,
            g,
            EvalOptions { record_subexpressions: false },
        )
        .unwrap();
        ev.eval_artifact("R").unwrap();
        let results = ev.into_results();
        assert!(results.series("R").is_some());
        assert!(results.series("R/0").is_none());
    }

    #[test]
    fn shared_function_is_computed_once() {
        let spec = parse_spec(
            "sensor a numeric\n\
             function F context(a) { a * 2 }\n\
             rule R1 { F > 4 }\n\
             rule R2 { F < 10 }",
        )
        .unwrap();
        let g = grid(2);
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(g, &[1.0, 3.0]));
        let results = evaluate_all(&spec, &data, g).unwrap();
        assert_eq!(results.eval_counts["F"], 1);
        assert_eq!(results.eval_counts["R1"], 1);
        use LogicSample::{False, True};
        assert_eq!(results.logic_samples("R1").unwrap(), [False, True]);
        assert_eq!(results.logic_samples("R2").unwrap(), [True, True]);
    }

    #[test]
    fn missing_context_blanks_the_verdict() {
        // The body would be decidable (a constant comparison), but with every
        // context sensor missing the rule must report missing.
        let spec = parse_spec("sensor a numeric\nrule R context(a) { 1 < 2 }").unwrap();
        let g = grid(2);
        let mut data = BTreeMap::new();
        data.insert(
            "a".to_string(),
            TimeSeries::numeric(g, vec![NumericSample::Missing, NumericSample::Value(1.0)])
                .unwrap(),
        );
        let results = evaluate_all(&spec, &data, g).unwrap();
        assert_eq!(
            results.logic_samples("R").unwrap(),
            [LogicSample::Missing, LogicSample::True]
        );
    }

    #[test]
    fn contextless_rule_is_never_blanked() {
        let spec = parse_spec("rule R { 1 < 2 }").unwrap();
        let g = grid(2);
        let data = BTreeMap::new();
        let results = evaluate_all(&spec, &data, g).unwrap();
        assert_eq!(results.logic_samples("R").unwrap(), [LogicSample::True; 2]);
    }

    #[test]
    fn partially_missing_context_still_propagates_per_operand() {
        let spec =
            parse_spec("sensor a numeric\nsensor b numeric\nrule R context(a, b) { a < b }")
                .unwrap();
        let g = grid(2);
        let mut data = BTreeMap::new();
        data.insert(
            "a".to_string(),
            TimeSeries::numeric(g, vec![NumericSample::Missing, NumericSample::Missing])
                .unwrap(),
        );
        data.insert("b".to_string(), numeric(g, &[1.0, 2.0]));
        let results = evaluate_all(&spec, &data, g).unwrap();
        // One context sensor still present: the body's own propagation
        // decides (here: comparison with a missing operand).
        assert_eq!(
            results.logic_samples("R").unwrap(),
            [LogicSample::Missing, LogicSample::Missing]
        );
    }

    #[test]
    fn characteristic_and_routine_artifacts() {
        let spec = parse_spec(
            "sensor x numeric\nsensor y numeric\n\
             characteristic C {\n    x x\n    y y\n    lower (0, 10) (100, 10)\n}\n\
             timeroutine Working {\n    hour 0-5\n}",
        )
        .unwrap();
        let g = grid(2);
        let mut data = BTreeMap::new();
        data.insert("x".to_string(), numeric(g, &[50.0, 200.0]));
        data.insert("y".to_string(), numeric(g, &[12.0, 12.0]));
        let results = evaluate_all(&spec, &data, g).unwrap();
        assert_eq!(
            results.logic_samples("C").unwrap(),
            [LogicSample::True, LogicSample::Undefined]
        );
        assert_eq!(results.logic_samples("Working").unwrap(), [LogicSample::True; 2]);
    }

    #[test]
    fn metric_over_a_function() {
        let spec = parse_spec(
            "sensor a numeric\n\
             function F context(a) { a * 2 }\n\
             metric M context(F) { AVERAGE PerHour }",
        )
        .unwrap();
        let g = grid(4);
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(g, &[1.0, 2.0, 3.0, 4.0]));
        let results = evaluate_all(&spec, &data, g).unwrap();
        let m = &results.metrics["M"];
        assert_eq!(m.buckets.len(), 1);
        assert_eq!(m.buckets[0].value, NumericSample::Value(5.0));
    }

    #[test]
    fn library_calls_fold_pointwise() {
        let spec = parse_spec(
            "sensor a numeric\nsensor b numeric\n\
             function M context(a, b) { MAXIMUM(a, b, 2.5) }\n\
             function V context(a, b) { AVERAGE(a, b) }",
        )
        .unwrap();
        let g = grid(2);
        let mut data = BTreeMap::new();
        data.insert(
            "a".to_string(),
            TimeSeries::numeric(g, vec![NumericSample::Value(1.0), NumericSample::Missing])
                .unwrap(),
        );
        data.insert("b".to_string(), numeric(g, &[4.0, 6.0]));
        let results = evaluate_all(&spec, &data, g).unwrap();
        assert_eq!(
            results.numeric_samples("M").unwrap(),
            [NumericSample::Value(4.0), NumericSample::Missing]
        );
        assert_eq!(
            results.numeric_samples("V").unwrap(),
            [NumericSample::Value(2.5), NumericSample::Missing]
        );
    }

    #[test]
    fn evaluation_is_pointwise_in_time() {
        // Changing other timestamps must not change the verdict at k=0.
        let spec =
            parse_spec("sensor a numeric\nrule R context(a) { a > 2 }").unwrap();
        let g = grid(3);
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(g, &[5.0, 1.0, 1.0]));
        let first = evaluate_all(&spec, &data, g).unwrap();
        data.insert("a".to_string(), numeric(g, &[5.0, 100.0, -7.0]));
        let second = evaluate_all(&spec, &data, g).unwrap();
        assert_eq!(
            first.logic_samples("R").unwrap()[0],
            second.logic_samples("R").unwrap()[0]
        );
    }

    #[test]
    fn unresolved_reference_is_a_runtime_error_too() {
        let spec = parse_spec("rule R { Ghost }").unwrap();
        let data = BTreeMap::new();
        let err = evaluate_all(&spec, &data, grid(1)).unwrap_err();
        assert_eq!(err, EvalError::UnknownReference("Ghost".into()));
    }

    #[test]
    fn cycles_are_rejected_at_run_time() {
        let spec = parse_spec("rule A { B }\nrule B { A }").unwrap();
        let data = BTreeMap::new();
        let err = evaluate_all(&spec, &data, grid(1)).unwrap_err();
        assert!(matches!(err, EvalError::Cycle(_)));
    }

    #[test]
    fn tolerant_mode_evaluates_what_it_can() {
        let spec = parse_spec(
            "sensor a numeric\n\
             rule Good context(a) { a > 0 }\n\
             rule Bad { Ghost }\n\
             rule AlsoBad { Bad }",
        )
        .unwrap();
        let g = grid(1);
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(g, &[1.0]));
        let (results, failures) =
            evaluate_tolerant(&spec, &data, g, EvalOptions::default()).unwrap();
        assert_eq!(results.logic_samples("Good").unwrap(), [LogicSample::True]);
        assert_eq!(failures.len(), 2);
        assert_eq!(failures["Bad"], EvalError::UnknownReference("Ghost".into()));
        assert_eq!(failures["AlsoBad"], EvalError::UnknownReference("Ghost".into()));
    }

    #[test]
    fn data_must_share_the_grid() {
        let spec = parse_spec("sensor a numeric\nrule R context(a) { a > 0 }").unwrap();
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(grid(2), &[1.0, 2.0]));
        let err = evaluate_all(&spec, &data, grid(3)).unwrap_err();
        assert_eq!(err, EvalError::GridMismatch("a".into()));
    }

    #[test]
    fn grid_mismatch_inside_data_is_caught_for_any_sensor() {
        let spec = parse_spec("rule R { 1 < 2 }").unwrap();
        let other = TimeGrid::new(
            Timestamp::parse("2011-01-01T00:00:00").unwrap(),
            900,
            2,
        )
        .unwrap();
        let mut data = BTreeMap::new();
        data.insert("unrelated".to_string(), numeric(other, &[1.0, 2.0]));
        assert!(evaluate_all(&spec, &data, grid(2)).is_err());
    }

    #[test]
    fn conditional_selects_numeric_branches() {
        let spec = parse_spec(
            "sensor a numeric\nsensor sw logic\n\
             function F context(a, sw) { IF sw THEN a ELSE a * 10 }",
        )
        .unwrap();
        let g = grid(4);
        let mut data = BTreeMap::new();
        data.insert("a".to_string(), numeric(g, &[1.0, 2.0, 3.0, 4.0]));
        data.insert(
            "sw".to_string(),
            logic_series(
                g,
                &[
                    LogicSample::True,
                    LogicSample::False,
                    LogicSample::Missing,
                    LogicSample::Undefined,
                ],
            ),
        );
        let results = evaluate_all(&spec, &data, g).unwrap();
        assert_eq!(
            results.numeric_samples("F").unwrap(),
            [
                NumericSample::Value(1.0),
                NumericSample::Value(20.0),
                NumericSample::Missing,
                NumericSample::Undefined,
            ]
        );
    }
}
