use std::collections::{BTreeMap, BTreeSet};

use crate::timeseries::{SensorMeta, SeriesKind};

use super::ast::*;
use super::graph::{artifact_references, build_dependency_graph};
use super::{Diagnostics, Span};

/// Check a parsed specification against a sensor catalog.
///
/// Errors cover unresolved references, kind mismatches, characteristic
/// point-list violations, calendar-bound violations, and reference cycles;
/// warnings flag artifacts nothing refers to. A spec with no errors is safe
/// to evaluate: every name resolves and every operand has the right kind.
pub fn validate_spec(spec: &Specification, catalog: &[SensorMeta]) -> Diagnostics {
    let mut diags = Diagnostics::new();

    // Spec-local sensor declarations take precedence over the catalog.
    let mut sensors: BTreeMap<&str, SeriesKind> =
        catalog.iter().map(|m| (m.id.as_str(), m.kind)).collect();
    for s in &spec.sensors {
        sensors.insert(s.meta.id.as_str(), s.meta.kind);
    }
    let artifacts: BTreeMap<&str, ArtifactKind> =
        spec.artifacts.iter().map(|a| (a.name(), a.kind())).collect();

    for artifact in &spec.artifacts {
        check_artifact(artifact, &sensors, &artifacts, None, &mut diags);
    }
    for template in &spec.templates {
        check_template(template, &sensors, &artifacts, &mut diags);
    }

    if let Err(cycle) = build_dependency_graph(spec).topo_order() {
        let span = spec
            .find_artifact(&cycle[0])
            .map(|a| a.span())
            .unwrap_or_default();
        diags.error(span, format!("reference cycle: {}", cycle.join(" -> ")));
    }

    warn_unreferenced(spec, &mut diags);
    diags
}

/// Artifact kinds evaluate to series of these kinds when referenced.
fn artifact_series_kind(kind: ArtifactKind) -> Option<SeriesKind> {
    match kind {
        ArtifactKind::Rule | ArtifactKind::TimeRoutine | ArtifactKind::Characteristic => {
            Some(SeriesKind::Logic)
        }
        ArtifactKind::Function => Some(SeriesKind::Numeric),
        // Metrics live on their own bucket timeline and cannot appear in
        // pointwise expressions.
        ArtifactKind::Metric => None,
    }
}

/// Name resolution for one artifact body: context sensors shadow artifacts.
struct Scope<'a> {
    what: &'a str,
    context: &'a [String],
    context_kinds: BTreeMap<&'a str, SeriesKind>,
    artifacts: &'a BTreeMap<&'a str, ArtifactKind>,
    /// Template-body artifacts visible alongside the global ones.
    siblings: &'a BTreeMap<&'a str, ArtifactKind>,
}

impl Scope<'_> {
    fn reference_kind(&self, name: &str, span: Span, diags: &mut Diagnostics) -> Option<SeriesKind> {
        if let Some(kind) = self.context_kinds.get(name) {
            return Some(*kind);
        }
        if self.context.iter().any(|c| c == name) {
            // Context id whose sensor is unknown: already reported once.
            return None;
        }
        let artifact =
            self.siblings.get(name).or_else(|| self.artifacts.get(name)).copied();
        match artifact {
            Some(kind) => match artifact_series_kind(kind) {
                Some(k) => Some(k),
                None => {
                    diags.error(
                        span,
                        format!("metric `{name}` cannot be referenced in an expression"),
                    );
                    None
                }
            },
            None => {
                diags.error(
                    span,
                    format!("unresolved reference `{name}` in {}", self.what),
                );
                None
            }
        }
    }
}

fn kind_name(kind: SeriesKind) -> &'static str {
    match kind {
        SeriesKind::Numeric => "numeric",
        SeriesKind::Logic => "logic",
    }
}

/// Infer the series kind of an expression, reporting kind errors.
/// `None` means a problem inside was already reported.
fn infer_kind(expr: &Expr, scope: &Scope<'_>, diags: &mut Diagnostics) -> Option<SeriesKind> {
    let demand = |e: &Expr, want: SeriesKind, role: &str, diags: &mut Diagnostics| {
        let found = infer_kind(e, scope, diags)?;
        if found == want {
            Some(())
        } else {
            diags.error(
                e.span,
                format!("{role} must be {}, found {}", kind_name(want), kind_name(found)),
            );
            None
        }
    };
    match &expr.kind {
        ExprKind::Number(_) => Some(SeriesKind::Numeric),
        ExprKind::Bool(_) => Some(SeriesKind::Logic),
        ExprKind::Ref(name) => scope.reference_kind(name, expr.span, diags),
        ExprKind::Not(e) => {
            demand(e, SeriesKind::Logic, "NOT operand", diags)?;
            Some(SeriesKind::Logic)
        }
        ExprKind::Binary(op, a, b) => {
            let role = |side: &str| format!("{side} operand of {}", op.symbol());
            if op.is_connective() {
                let lhs = demand(a, SeriesKind::Logic, &role("left"), diags);
                demand(b, SeriesKind::Logic, &role("right"), diags).and(lhs)?;
                Some(SeriesKind::Logic)
            } else {
                let lhs = demand(a, SeriesKind::Numeric, &role("left"), diags);
                demand(b, SeriesKind::Numeric, &role("right"), diags).and(lhs)?;
                Some(if op.is_comparison() { SeriesKind::Logic } else { SeriesKind::Numeric })
            }
        }
        ExprKind::IfThenElse { cond, then, otherwise } => {
            let cond_ok = demand(cond, SeriesKind::Logic, "condition", diags);
            match otherwise {
                None => {
                    // The implicit ELSE is logic true, so the THEN branch
                    // must be logic as well.
                    demand(then, SeriesKind::Logic, "THEN branch without ELSE", diags)
                        .and(cond_ok)?;
                    Some(SeriesKind::Logic)
                }
                Some(e) => {
                    let t = infer_kind(then, scope, diags);
                    let o = infer_kind(e, scope, diags);
                    cond_ok?;
                    let (t, o) = (t?, o?);
                    if t != o {
                        diags.error(
                            expr.span,
                            format!(
                                "THEN branch is {} but ELSE branch is {}",
                                kind_name(t),
                                kind_name(o)
                            ),
                        );
                        return None;
                    }
                    Some(t)
                }
            }
        }
        ExprKind::Call(f, args) => {
            let mut ok = Some(());
            for a in args {
                ok = demand(a, SeriesKind::Numeric, &format!("{} argument", f.name()), diags)
                    .and(ok);
            }
            ok?;
            Some(SeriesKind::Numeric)
        }
    }
}

fn check_context<'a>(
    what: &str,
    context: &'a [String],
    sensors: &BTreeMap<&str, SeriesKind>,
    span: Span,
    diags: &mut Diagnostics,
) -> BTreeMap<&'a str, SeriesKind> {
    let mut kinds = BTreeMap::new();
    for id in context {
        match sensors.get(id.as_str()) {
            Some(kind) => {
                kinds.insert(id.as_str(), *kind);
            }
            None => diags.error(span, format!("unknown sensor `{id}` in {what} context")),
        }
    }
    kinds
}

fn check_artifact(
    artifact: &ArtifactDef,
    sensors: &BTreeMap<&str, SeriesKind>,
    artifacts: &BTreeMap<&str, ArtifactKind>,
    siblings: Option<&BTreeMap<&str, ArtifactKind>>,
    diags: &mut Diagnostics,
) {
    static NO_SIBLINGS: BTreeMap<&str, ArtifactKind> = BTreeMap::new();
    let siblings = siblings.unwrap_or(&NO_SIBLINGS);
    match artifact {
        ArtifactDef::Rule(d) => {
            let what = format!("rule `{}`", d.name);
            let context_kinds = check_context(&what, &d.context, sensors, d.span, diags);
            let scope = Scope { what: &what, context: &d.context, context_kinds, artifacts, siblings };
            if let Some(kind) = infer_kind(&d.body, &scope, diags) {
                if kind != SeriesKind::Logic {
                    diags.error(d.body.span, format!("{what} body must be logic-valued"));
                }
            }
        }
        ArtifactDef::Function(d) => {
            let what = format!("function `{}`", d.name);
            let context_kinds = check_context(&what, &d.context, sensors, d.span, diags);
            let scope = Scope { what: &what, context: &d.context, context_kinds, artifacts, siblings };
            if let Some(kind) = infer_kind(&d.body, &scope, diags) {
                if kind != SeriesKind::Numeric {
                    diags.error(d.body.span, format!("{what} body must be numeric-valued"));
                }
            }
        }
        ArtifactDef::Metric(d) => check_metric(d, sensors, artifacts, siblings, diags),
        ArtifactDef::TimeRoutine(d) => check_routine(d, artifacts, siblings, diags),
        ArtifactDef::Characteristic(d) => check_characteristic(d, sensors, diags),
    }
}

fn check_metric(
    d: &MetricDef,
    sensors: &BTreeMap<&str, SeriesKind>,
    artifacts: &BTreeMap<&str, ArtifactKind>,
    siblings: &BTreeMap<&str, ArtifactKind>,
    diags: &mut Diagnostics,
) {
    let what = format!("metric `{}`", d.name);
    let target = d.context.as_str();
    let resolved = sensors
        .get(target)
        .copied()
        .or_else(|| {
            siblings
                .get(target)
                .or_else(|| artifacts.get(target))
                .copied()
                .map(|k| artifact_series_kind(k).unwrap_or(SeriesKind::Logic))
        });
    match resolved {
        None => diags.error(d.span, format!("unresolved reference `{target}` in {what}")),
        Some(SeriesKind::Logic) => {
            diags.error(d.span, format!("{what} context `{target}` must be numeric"))
        }
        Some(SeriesKind::Numeric) => {}
    }
    match &d.base {
        MetricBase::Average | MetricBase::Sum | MetricBase::Maximum | MetricBase::Minimum => {}
        MetricBase::Named { name, params } => match name.as_str() {
            "STDDEV" => {
                if !params.is_empty() {
                    diags.error(d.span, format!("{what}: STDDEV takes no parameters"));
                }
            }
            "PERCENTILE" => {
                if params.len() != 1 {
                    diags.error(d.span, format!("{what}: PERCENTILE takes one parameter"));
                } else if !(0.0..=100.0).contains(&params[0]) {
                    diags.error(
                        d.span,
                        format!("{what}: PERCENTILE parameter must lie in 0..=100"),
                    );
                }
            }
            other => diags.error(d.span, format!("{what}: unknown aggregate `{other}`")),
        },
    }
}

fn check_pattern(
    routine: &str,
    field: &str,
    pattern: &Pattern,
    bounds: (u32, u32),
    span: Span,
    diags: &mut Diagnostics,
) {
    let Pattern::Parts(parts) = pattern else { return };
    if parts.is_empty() {
        diags.error(span, format!("{routine}: empty `{field}` pattern"));
    }
    let (lo, hi) = bounds;
    let check_value = |v: u32, diags: &mut Diagnostics| {
        if v < lo || v > hi {
            diags.error(span, format!("{routine}: `{field}` value {v} outside {lo}..={hi}"));
        }
    };
    for part in parts {
        match *part {
            PatternPart::Value(v) => check_value(v, diags),
            PatternPart::Range(a, b) => {
                check_value(a, diags);
                check_value(b, diags);
                if a > b {
                    diags.error(span, format!("{routine}: empty `{field}` range {a}-{b}"));
                }
            }
        }
    }
}

fn check_routine(
    d: &TimeRoutineDef,
    artifacts: &BTreeMap<&str, ArtifactKind>,
    siblings: &BTreeMap<&str, ArtifactKind>,
    diags: &mut Diagnostics,
) {
    let what = format!("time routine `{}`", d.name);
    let bounds = [
        ("year", &d.fields.year, (1, 9999)),
        ("month", &d.fields.month, (1, 12)),
        ("day", &d.fields.day, (1, 31)),
        ("dayofweek", &d.fields.dayofweek, (1, 7)),
        ("hour", &d.fields.hour, (0, 23)),
        ("minute", &d.fields.minute, (0, 59)),
        ("second", &d.fields.second, (0, 59)),
    ];
    for (field, pattern, range) in bounds {
        check_pattern(&what, field, pattern, range, d.span, diags);
    }
    for name in d.includes.iter().chain(&d.excludes) {
        match siblings.get(name.as_str()).or_else(|| artifacts.get(name.as_str())) {
            Some(ArtifactKind::TimeRoutine) => {}
            Some(_) => diags.error(
                d.span,
                format!("{what}: `{name}` is not a time routine"),
            ),
            None => diags.error(d.span, format!("unresolved reference `{name}` in {what}")),
        }
    }
}

/// Piecewise-linear value of a polyline at `x`, inside its span only.
fn polyline_at(points: &[(f64, f64)], x: f64) -> Option<f64> {
    let (first, last) = (points.first()?, points.last()?);
    if x < first.0 || x > last.0 {
        return None;
    }
    let right = points.iter().position(|p| p.0 >= x)?;
    let (x1, y1) = points[right];
    if x1 == x || right == 0 {
        return Some(y1);
    }
    let (x0, y0) = points[right - 1];
    Some(y0 + (x - x0) / (x1 - x0) * (y1 - y0))
}

fn check_characteristic(
    d: &CharacteristicDef,
    sensors: &BTreeMap<&str, SeriesKind>,
    diags: &mut Diagnostics,
) {
    let what = format!("characteristic `{}`", d.name);
    for (axis, id) in [("x", &d.x_sensor), ("y", &d.y_sensor)] {
        match sensors.get(id.as_str()) {
            None => diags.error(d.span, format!("unknown sensor `{id}` as {what} {axis} axis")),
            Some(SeriesKind::Logic) => {
                diags.error(d.span, format!("{what} {axis} axis `{id}` must be numeric"))
            }
            Some(SeriesKind::Numeric) => {}
        }
    }
    if d.lower.is_empty() && d.upper.is_empty() {
        diags.error(d.span, format!("{what} needs a lower or upper point list"));
    }
    for (name, points) in [("lower", &d.lower), ("upper", &d.upper)] {
        for pair in points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                diags.error(
                    d.span,
                    format!(
                        "{what}: `{name}` x values must be strictly increasing ({} then {})",
                        pair[0].0, pair[1].0
                    ),
                );
            }
        }
    }
    // Where both bounds exist they must leave room: lower(x) <= upper(x).
    // Both are piecewise linear, so checking every breakpoint suffices.
    if !d.lower.is_empty() && !d.upper.is_empty() {
        let breakpoints = d.lower.iter().chain(&d.upper).map(|p| p.0);
        for x in breakpoints {
            if let (Some(lo), Some(hi)) = (polyline_at(&d.lower, x), polyline_at(&d.upper, x)) {
                if lo > hi {
                    diags.error(
                        d.span,
                        format!("{what}: lower bound {lo} exceeds upper bound {hi} at x = {x}"),
                    );
                }
            }
        }
    }
}

fn check_template(
    t: &TemplateDef,
    sensors: &BTreeMap<&str, SeriesKind>,
    artifacts: &BTreeMap<&str, ArtifactKind>,
    diags: &mut Diagnostics,
) {
    let mut placeholder_names = BTreeSet::new();
    for p in &t.params {
        if !placeholder_names.insert(p.name.as_str()) {
            diags.error(p.span, format!("duplicate placeholder `{}`", p.name));
        }
        if sensors.contains_key(p.name.as_str()) {
            diags.error(
                p.span,
                format!("placeholder `{}` shadows a declared sensor", p.name),
            );
        }
    }
    // Inside the body, placeholders are the only visible sensors; sibling
    // artifacts and global artifacts are both referenceable.
    let placeholder_kinds: BTreeMap<&str, SeriesKind> =
        t.params.iter().map(|p| (p.name.as_str(), p.kind)).collect();
    let siblings: BTreeMap<&str, ArtifactKind> =
        t.body.iter().map(|a| (a.name(), a.kind())).collect();
    for artifact in &t.body {
        check_artifact(artifact, &placeholder_kinds, artifacts, Some(&siblings), diags);
    }
}

fn warn_unreferenced(spec: &Specification, diags: &mut Diagnostics) {
    let mut referenced: BTreeSet<String> = BTreeSet::new();
    for artifact in &spec.artifacts {
        referenced.extend(artifact_references(artifact));
    }
    for template in &spec.templates {
        for artifact in &template.body {
            referenced.extend(artifact_references(artifact));
        }
    }
    for artifact in &spec.artifacts {
        // Rules and metrics are end products; the supporting kinds exist to
        // be referenced.
        let supporting = matches!(
            artifact.kind(),
            ArtifactKind::Function | ArtifactKind::TimeRoutine | ArtifactKind::Characteristic
        );
        if supporting && !referenced.contains(artifact.name()) {
            diags.warning(
                artifact.span(),
                format!("{} `{}` is never referenced", artifact.kind().keyword(), artifact.name()),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_spec;
    use super::*;

    fn validate(src: &str) -> Diagnostics {
        validate_spec(&parse_spec(src).unwrap(), &[])
    }

    fn errors(src: &str) -> String {
        let d = validate(src);
        assert!(d.has_errors(), "expected errors, got: {d}");
        d.to_string()
    }

    #[test]
    fn well_formed_conditional_rule_passes() {
        let d = validate(
            "sensor i2 numeric\nsensor i4 numeric\nsensor t_out numeric\nsensor t_sup numeric\n\
             rule R context(i2, i4) { IF Shift AND i2 < 3 THEN Band1 \
             ELSE IF NOT Shift AND i2 < i4 THEN Band2 }\n\
             timeroutine Shift { dayofweek Monday-Friday\n hour 8-17 }\n\
             characteristic Band1 { x t_out\n y t_sup\n lower (-10, 20) (10, 21)\n upper (-10, 24) (10, 26) }\n\
             characteristic Band2 { x t_out\n y t_sup\n upper (-10, 30) (10, 32) }",
        );
        assert!(!d.has_errors(), "unexpected: {d}");
        assert!(d.is_empty(), "unexpected warnings: {d}");
    }

    #[test]
    fn logic_sensor_in_comparison_is_a_kind_error() {
        let msg = errors("sensor i2 logic\nrule R context(i2) { i2 < 3 }");
        assert!(msg.contains("must be numeric, found logic"), "{msg}");
    }

    #[test]
    fn crossing_bounds_are_rejected() {
        let msg = errors(
            "sensor a numeric\nsensor b numeric\nrule R { C }\n\
             characteristic C { x a\n y b\n lower (0, 10) (10, 30)\n upper (0, 20) (10, 25) }",
        );
        assert!(msg.contains("exceeds upper bound"), "{msg}");
    }

    #[test]
    fn crossing_detected_at_interior_breakpoint() {
        // Bounds cross strictly between shared endpoints: the lower list has
        // a breakpoint at x=5 poking above the straight upper segment.
        let msg = errors(
            "sensor a numeric\nsensor b numeric\nrule R { C }\n\
             characteristic C { x a\n y b\n lower (0, 0) (5, 40) (10, 0)\n upper (0, 20) (10, 20) }",
        );
        assert!(msg.contains("at x = 5"), "{msg}");
    }

    #[test]
    fn unresolved_and_metric_references() {
        let msg = errors("rule R { Ghost }");
        assert!(msg.contains("unresolved reference `Ghost`"), "{msg}");
        let msg = errors(
            "sensor s numeric\nmetric m context(s) { AVERAGE PerHour }\nrule R { m }",
        );
        assert!(msg.contains("metric `m` cannot be referenced"), "{msg}");
    }

    #[test]
    fn rule_body_must_be_logic() {
        let msg = errors("sensor s numeric\nrule R context(s) { s + 1 }");
        assert!(msg.contains("must be logic-valued"), "{msg}");
        let msg = errors("sensor s numeric\nfunction f context(s) { s > 1 }");
        assert!(msg.contains("must be numeric-valued"), "{msg}");
    }

    #[test]
    fn branch_kinds_must_agree() {
        let msg = errors("sensor s numeric\nrule R context(s) { IF s > 0 THEN true ELSE s }");
        assert!(msg.contains("THEN branch is logic but ELSE branch is numeric"), "{msg}");
        let msg = errors("sensor s numeric\nrule R context(s) { IF s > 0 THEN s + 1 }");
        assert!(msg.contains("THEN branch without ELSE must be logic"), "{msg}");
    }

    #[test]
    fn calendar_bounds_are_enforced() {
        let msg = errors("timeroutine T { hour 24 }\nrule R { T }");
        assert!(msg.contains("`hour` value 24 outside 0..=23"), "{msg}");
        let msg = errors("timeroutine T { month 5-2 }\nrule R { T }");
        assert!(msg.contains("empty `month` range 5-2"), "{msg}");
        let msg = errors("timeroutine T { include X }\nrule R { T }\nrule X { true }");
        assert!(msg.contains("`X` is not a time routine"), "{msg}");
    }

    #[test]
    fn characteristic_geometry_is_checked() {
        let msg = errors(
            "sensor a numeric\nsensor b numeric\nrule R { C }\n\
             characteristic C { x a\n y b\n lower (5, 1) (5, 2) }",
        );
        assert!(msg.contains("strictly increasing"), "{msg}");
        let msg = errors("sensor a numeric\nsensor b logic\nrule R { C }\n\
             characteristic C { x a\n y b\n lower (0, 1) }");
        assert!(msg.contains("y axis `b` must be numeric"), "{msg}");
    }

    #[test]
    fn cycles_are_reported_with_their_path() {
        let msg = errors("timeroutine A { include B }\ntimeroutine B { include A }\nrule R { A }");
        assert!(msg.contains("reference cycle: A -> B -> A"), "{msg}");
    }

    #[test]
    fn unreferenced_support_artifacts_warn() {
        let d = validate("sensor s numeric\nfunction f context(s) { s * 2 }");
        assert!(!d.has_errors());
        assert_eq!(d.len(), 1);
        assert!(d.to_string().contains("function `f` is never referenced"));
    }

    #[test]
    fn catalog_sensors_resolve_context_ids() {
        let spec = parse_spec("rule R context(ext) { ext > 0 }").unwrap();
        let catalog =
            [SensorMeta { id: "ext".into(), label: None, unit: None, kind: SeriesKind::Numeric }];
        assert!(!validate_spec(&spec, &catalog).has_errors());
        assert!(validate_spec(&spec, &[]).has_errors());
    }

    #[test]
    fn percentile_parameters_are_checked() {
        let msg = errors("sensor s numeric\nmetric m context(s) { PERCENTILE(101) PerDay }");
        assert!(msg.contains("must lie in 0..=100"), "{msg}");
        let msg = errors("sensor s numeric\nmetric m context(s) { PERCENTILE PerDay }");
        assert!(msg.contains("takes one parameter"), "{msg}");
        let msg = errors("sensor s numeric\nmetric m context(s) { MEDIAN PerDay }");
        assert!(msg.contains("unknown aggregate `MEDIAN`"), "{msg}");
        let d = validate("sensor s numeric\nmetric m context(s) { STDDEV PerDay }");
        assert!(!d.has_errors(), "{d}");
    }

    #[test]
    fn metric_context_must_be_numeric() {
        let msg = errors("rule X { true }\nmetric m context(X) { AVERAGE PerDay }");
        assert!(msg.contains("must be numeric"), "{msg}");
        let d = validate(
            "sensor s numeric\nfunction f context(s) { s * 1 }\n\
             metric m context(f) { SUM PerYear }",
        );
        assert!(!d.has_errors(), "{d}");
    }

    #[test]
    fn template_bodies_use_placeholders_only() {
        let d = validate(
            "sensor global numeric\nrule Use { Helper }\nrule Helper { true }\n\
             template T(a numeric, ok logic) {\n\
             rule Inner context(a, ok) { ok IMPLIES a < 5 AND Helper }\n}",
        );
        assert!(!d.has_errors(), "{d}");
        let msg = errors("sensor g numeric\ntemplate T(a numeric) { rule I context(g) { g > 0 } }");
        assert!(msg.contains("unknown sensor `g`"), "{msg}");
    }

    #[test]
    fn template_placeholder_collisions_are_flagged() {
        let msg = errors("template T(a numeric, a logic) { rule I { a } }");
        assert!(msg.contains("duplicate placeholder `a`"), "{msg}");
        let msg = errors("sensor s numeric\ntemplate T(s numeric) { rule I context(s) { s > 0 } }");
        assert!(msg.contains("shadows a declared sensor"), "{msg}");
    }
}
