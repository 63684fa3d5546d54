use std::fmt::Write;

use crate::timeseries::SeriesKind;

use super::ast::*;
use super::lexer::quote;
use super::parser::weekday_name;

/// Render a specification as canonical source text.
///
/// The output uses LF line endings, four-space indentation, one artifact per
/// block, and only the parentheses required to reproduce the tree: parsing
/// the result yields a structurally equal [`Specification`].
pub fn format_spec(spec: &Specification) -> String {
    let mut out = String::new();
    if let Some(step) = spec.grid_step {
        let _ = writeln!(out, "grid step {step}");
    }
    if !spec.sensors.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        for s in &spec.sensors {
            write_sensor(&mut out, s);
        }
    }
    for artifact in &spec.artifacts {
        if !out.is_empty() {
            out.push('\n');
        }
        write_artifact(&mut out, artifact, 0);
    }
    for t in &spec.templates {
        if !out.is_empty() {
            out.push('\n');
        }
        write_template(&mut out, t);
    }
    out
}

/// Render a single expression in canonical form.
pub fn format_expr(expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr, 0);
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn write_sensor(out: &mut String, s: &SensorDecl) {
    let kind = match s.meta.kind {
        SeriesKind::Numeric => "numeric",
        SeriesKind::Logic => "logic",
    };
    let _ = write!(out, "sensor {} {kind}", s.meta.id);
    if let Some(unit) = &s.meta.unit {
        let _ = write!(out, " unit {}", quote(unit));
    }
    if let Some(label) = &s.meta.label {
        let _ = write!(out, " label {}", quote(label));
    }
    out.push('\n');
}

fn write_artifact(out: &mut String, artifact: &ArtifactDef, level: usize) {
    match artifact {
        ArtifactDef::Rule(d) => write_rule_like(out, "rule", &d.name, &d.context, &d.body, level),
        ArtifactDef::Function(d) => {
            write_rule_like(out, "function", &d.name, &d.context, &d.body, level)
        }
        ArtifactDef::Metric(d) => write_metric(out, d, level),
        ArtifactDef::TimeRoutine(d) => write_timeroutine(out, d, level),
        ArtifactDef::Characteristic(d) => write_characteristic(out, d, level),
    }
}

fn write_rule_like(
    out: &mut String,
    kw: &str,
    name: &str,
    context: &[String],
    body: &Expr,
    level: usize,
) {
    indent(out, level);
    let _ = write!(out, "{kw} {name}");
    if !context.is_empty() {
        let _ = write!(out, " context({})", context.join(", "));
    }
    out.push_str(" {\n");
    indent(out, level + 1);
    write_expr(out, body, 0);
    out.push('\n');
    indent(out, level);
    out.push_str("}\n");
}

fn write_metric(out: &mut String, d: &MetricDef, level: usize) {
    indent(out, level);
    let _ = writeln!(out, "metric {} context({}) {{", d.name, d.context);
    indent(out, level + 1);
    match &d.base {
        MetricBase::Average => out.push_str("AVERAGE"),
        MetricBase::Sum => out.push_str("SUM"),
        MetricBase::Maximum => out.push_str("MAXIMUM"),
        MetricBase::Minimum => out.push_str("MINIMUM"),
        MetricBase::Named { name, params } => {
            out.push_str(name);
            if !params.is_empty() {
                let rendered: Vec<String> = params.iter().map(|p| p.to_string()).collect();
                let _ = write!(out, "({})", rendered.join(", "));
            }
        }
    }
    let _ = writeln!(out, " {}", d.filter.name());
    indent(out, level);
    out.push_str("}\n");
}

fn write_pattern(out: &mut String, field: &str, pattern: &Pattern) {
    let Pattern::Parts(parts) = pattern else { return };
    let is_weekday = field == "dayofweek";
    let value = |v: u32| {
        if is_weekday {
            weekday_name(v).to_string()
        } else {
            v.to_string()
        }
    };
    let rendered: Vec<String> = parts
        .iter()
        .map(|p| match *p {
            PatternPart::Value(v) => value(v),
            PatternPart::Range(lo, hi) => format!("{}-{}", value(lo), value(hi)),
        })
        .collect();
    let _ = writeln!(out, "{field} {}", rendered.join(", "));
}

fn write_timeroutine(out: &mut String, d: &TimeRoutineDef, level: usize) {
    indent(out, level);
    let _ = writeln!(out, "timeroutine {} {{", d.name);
    let fields = [
        ("year", &d.fields.year),
        ("month", &d.fields.month),
        ("day", &d.fields.day),
        ("dayofweek", &d.fields.dayofweek),
        ("hour", &d.fields.hour),
        ("minute", &d.fields.minute),
        ("second", &d.fields.second),
    ];
    for (name, pattern) in fields {
        if !matches!(pattern, Pattern::Any) {
            indent(out, level + 1);
            write_pattern(out, name, pattern);
        }
    }
    if !d.includes.is_empty() {
        indent(out, level + 1);
        let _ = writeln!(out, "include {}", d.includes.join(", "));
    }
    if !d.excludes.is_empty() {
        indent(out, level + 1);
        let _ = writeln!(out, "exclude {}", d.excludes.join(", "));
    }
    indent(out, level);
    out.push_str("}\n");
}

fn write_points(out: &mut String, name: &str, points: &[(f64, f64)], level: usize) {
    if points.is_empty() {
        return;
    }
    indent(out, level);
    let rendered: Vec<String> = points.iter().map(|(x, y)| format!("({x}, {y})")).collect();
    let _ = writeln!(out, "{name} {}", rendered.join(" "));
}

fn write_characteristic(out: &mut String, d: &CharacteristicDef, level: usize) {
    indent(out, level);
    let _ = writeln!(out, "characteristic {} {{", d.name);
    indent(out, level + 1);
    let _ = writeln!(out, "x {}", d.x_sensor);
    indent(out, level + 1);
    let _ = writeln!(out, "y {}", d.y_sensor);
    write_points(out, "lower", &d.lower, level + 1);
    write_points(out, "upper", &d.upper, level + 1);
    indent(out, level);
    out.push_str("}\n");
}

fn write_template(out: &mut String, t: &TemplateDef) {
    let params: Vec<String> = t
        .params
        .iter()
        .map(|p| {
            let kind = match p.kind {
                SeriesKind::Numeric => "numeric",
                SeriesKind::Logic => "logic",
            };
            format!("{} {kind}", p.name)
        })
        .collect();
    let _ = writeln!(out, "template {}({}) {{", t.name, params.join(", "));
    for (i, artifact) in t.body.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_artifact(out, artifact, 1);
    }
    out.push_str("}\n");
}

// ----- expressions ------------------------------------------------------

/// Binding power; a node is parenthesized when its power is below the
/// minimum its position requires. Tighter operators have higher power.
fn power(kind: &ExprKind) -> u8 {
    match kind {
        ExprKind::IfThenElse { .. } => 0,
        ExprKind::Binary(op, _, _) => match op {
            BinOp::Implies => 1,
            BinOp::Or => 2,
            BinOp::And => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div => 6,
        },
        ExprKind::Not(_) => 7,
        ExprKind::Number(_) | ExprKind::Bool(_) | ExprKind::Ref(_) | ExprKind::Call(..) => 8,
    }
}

/// Would this expression claim a following ELSE? True for a conditional
/// chain whose rightmost branch still lacks one.
fn absorbs_else(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::IfThenElse { otherwise: None, .. } => true,
        ExprKind::IfThenElse { otherwise: Some(o), .. } => absorbs_else(o),
        _ => false,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let mine = power(&e.kind);
    let wrap = mine < min;
    if wrap {
        out.push('(');
    }
    match &e.kind {
        ExprKind::Number(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ExprKind::Ref(name) => out.push_str(name),
        ExprKind::Call(f, args) => {
            out.push_str(f.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
        ExprKind::Not(x) => {
            out.push_str("NOT ");
            write_expr(out, x, 7);
        }
        ExprKind::Binary(op, a, b) => {
            // IMPLIES chains to the right, comparisons do not chain at all,
            // everything else chains to the left.
            let (left_min, right_min) = match op {
                BinOp::Implies => (mine + 1, mine),
                op if op.is_comparison() => (mine + 1, mine + 1),
                _ => (mine, mine + 1),
            };
            write_expr(out, a, left_min);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, b, right_min);
        }
        ExprKind::IfThenElse { cond, then, otherwise } => {
            out.push_str("IF ");
            write_expr(out, cond, 1);
            out.push_str(" THEN ");
            // A then-branch that could swallow our ELSE needs explicit
            // grouping; this is the language's only dangling-else hazard.
            if otherwise.is_some() && absorbs_else(then) {
                out.push('(');
                write_expr(out, then, 0);
                out.push(')');
            } else {
                write_expr(out, then, 0);
            }
            if let Some(o) = otherwise {
                out.push_str(" ELSE ");
                write_expr(out, o, 0);
            }
        }
    }
    if wrap {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_spec;
    use super::*;

    fn roundtrip(src: &str) -> Specification {
        let spec = parse_spec(src).unwrap();
        let text = format_spec(&spec);
        let again = parse_spec(&text)
            .unwrap_or_else(|e| panic!("canonical text failed to parse:\n{text}\n{e}"));
        assert_eq!(again, spec, "canonical text changed structure:\n{text}");
        again
    }

    fn canon_body(body: &str) -> String {
        let spec = parse_spec(&format!("rule R {{ {body} }}")).unwrap();
        let text = format_expr(&spec.rules().next().unwrap().body);
        text
    }

    #[test]
    fn drops_redundant_parentheses() {
        assert_eq!(canon_body("((a AND (b))) OR c"), "a AND b OR c");
        assert_eq!(canon_body("(a * b) + c"), "a * b + c");
        assert_eq!(canon_body("NOT (a)"), "NOT a");
    }

    #[test]
    fn keeps_structural_parentheses() {
        assert_eq!(canon_body("a AND (b OR c)"), "a AND (b OR c)");
        assert_eq!(canon_body("(s1 + s2) / 100"), "(s1 + s2) / 100");
        assert_eq!(canon_body("a - (b - c)"), "a - (b - c)");
        assert_eq!(canon_body("(a IMPLIES b) IMPLIES c"), "(a IMPLIES b) IMPLIES c");
        assert_eq!(canon_body("NOT (a AND b)"), "NOT (a AND b)");
        assert_eq!(canon_body("(IF a THEN b ELSE c) AND d"), "(IF a THEN b ELSE c) AND d");
    }

    #[test]
    fn right_implication_chain_prints_flat() {
        assert_eq!(canon_body("a IMPLIES (b IMPLIES c)"), "a IMPLIES b IMPLIES c");
    }

    #[test]
    fn dangling_else_forces_grouping() {
        // Inner conditional without ELSE inside a then-branch would claim
        // the outer ELSE, so the formatter wraps it.
        assert_eq!(
            canon_body("IF a THEN (IF b THEN c) ELSE d"),
            "IF a THEN (IF b THEN c) ELSE d"
        );
        // Rightmost branch of the then-chain is still open: same hazard.
        assert_eq!(
            canon_body("IF a THEN (IF b THEN c ELSE IF e THEN f) ELSE g"),
            "IF a THEN (IF b THEN c ELSE IF e THEN f) ELSE g"
        );
        // No outer ELSE: nesting needs no parentheses.
        assert_eq!(canon_body("IF a THEN (IF b THEN c)"), "IF a THEN IF b THEN c");
        // Then-branch cannot absorb: chain stays flat.
        assert_eq!(
            canon_body("IF a THEN b ELSE IF c THEN d ELSE e"),
            "IF a THEN b ELSE IF c THEN d ELSE e"
        );
    }

    #[test]
    fn numbers_print_shortest_form() {
        assert_eq!(canon_body("3.0 + 0.50 - -2.25"), "3 + 0.5 - -2.25");
    }

    #[test]
    fn full_specification_round_trips() {
        roundtrip(
            "grid step 900\n\
             sensor i2 numeric unit \"m3/h\" label \"Flow \\\"raw\\\"\"\n\
             sensor ok logic\n\
             rule R context(i2) { IF Shift AND i2 < 3 THEN Band ELSE IF NOT Shift THEN i2 > 0 }\n\
             function f context(i2) { (i2 + i2) / 100 }\n\
             metric m context(f) { PERCENTILE(95) PerDay }\n\
             timeroutine Shift { dayofweek Monday-Friday\n hour 8-17\n exclude Holidays }\n\
             timeroutine Holidays { month 12\n day 24-26 }\n\
             characteristic Band { x i2\n y i2\n lower (-10, 20) (10, 21) }\n\
             template T(a numeric) { rule Inner context(a) { a < 5 }\n\
             metric Peak context(a) { MAXIMUM PerWeek } }",
        );
    }

    #[test]
    fn formatting_is_idempotent() {
        let spec = parse_spec(
            "rule R { ((a OR b)) AND (IF c THEN d ELSE (e IMPLIES f)) }\n\
             timeroutine T { hour 0-6, 20-23\n dayofweek Saturday, Sunday }",
        )
        .unwrap();
        let once = format_spec(&spec);
        let twice = format_spec(&parse_spec(&once).unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn empty_spec_formats_to_empty_text() {
        assert_eq!(format_spec(&Specification::default()), "");
    }

    #[test]
    fn canonical_layout_shape() {
        let spec = parse_spec("sensor a numeric\ngrid step 60\nrule R context(a) { a < 1 }")
            .unwrap();
        assert_eq!(
            format_spec(&spec),
            "grid step 60\n\nsensor a numeric\n\nrule R context(a) {\n    a < 1\n}\n"
        );
    }

    #[test]
    fn weekday_patterns_print_names() {
        let spec = parse_spec("timeroutine T { dayofweek 1-5, 7 }").unwrap();
        let text = format_spec(&spec);
        assert!(text.contains("dayofweek Monday-Friday, Sunday"));
        roundtrip(&text);
    }
}
