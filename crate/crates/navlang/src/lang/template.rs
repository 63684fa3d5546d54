use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::timeseries::{SensorMeta, SeriesKind};

use super::ast::*;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum TemplateError {
    #[error("placeholder `{0}` has no binding")]
    UnboundPlaceholder(String),
    #[error("binding `{0}` names no placeholder")]
    UnknownBinding(String),
    #[error("binding for `{placeholder}` names unknown sensor `{sensor}`")]
    UnknownSensor { placeholder: String, sensor: String },
    #[error("placeholder `{placeholder}` is {expected} but sensor `{sensor}` is {found}")]
    KindMismatch { placeholder: String, expected: SeriesKind, sensor: String, found: SeriesKind },
    #[error("instantiated name `{0}` collides with a declared sensor")]
    NameCollision(String),
}

/// Stamp out a template's artifacts for one concrete equipment instance.
///
/// Placeholder references are replaced by the bound sensor ids and every
/// artifact defined inside the template is renamed with `name_prefix`, so
/// the same template can be instantiated repeatedly without name clashes.
/// References to artifacts defined outside the template pass through
/// untouched. Collisions with artifacts already in a specification surface
/// when the combined result is validated.
pub fn instantiate_template(
    tmpl: &TemplateDef,
    bindings: &BTreeMap<String, String>,
    name_prefix: &str,
    catalog: &[SensorMeta],
) -> Result<Vec<ArtifactDef>, TemplateError> {
    for key in bindings.keys() {
        if !tmpl.params.iter().any(|p| &p.name == key) {
            return Err(TemplateError::UnknownBinding(key.clone()));
        }
    }
    let mut rename: BTreeMap<&str, String> = BTreeMap::new();
    for p in &tmpl.params {
        let sensor = bindings
            .get(&p.name)
            .ok_or_else(|| TemplateError::UnboundPlaceholder(p.name.clone()))?;
        let meta = catalog.iter().find(|m| &m.id == sensor).ok_or_else(|| {
            TemplateError::UnknownSensor { placeholder: p.name.clone(), sensor: sensor.clone() }
        })?;
        if meta.kind != p.kind {
            return Err(TemplateError::KindMismatch {
                placeholder: p.name.clone(),
                expected: p.kind,
                sensor: sensor.clone(),
                found: meta.kind,
            });
        }
        rename.insert(p.name.as_str(), sensor.clone());
    }

    let sensor_ids: BTreeSet<&str> = catalog.iter().map(|m| m.id.as_str()).collect();
    for artifact in &tmpl.body {
        let renamed = format!("{name_prefix}{}", artifact.name());
        if sensor_ids.contains(renamed.as_str()) {
            return Err(TemplateError::NameCollision(renamed));
        }
        rename.insert(artifact.name(), renamed);
    }

    Ok(tmpl.body.iter().map(|a| rename_artifact(a, &rename)).collect())
}

fn renamed(name: &str, rename: &BTreeMap<&str, String>) -> String {
    rename.get(name).cloned().unwrap_or_else(|| name.to_string())
}

fn rename_list(names: &[String], rename: &BTreeMap<&str, String>) -> Vec<String> {
    names.iter().map(|n| renamed(n, rename)).collect()
}

fn rename_expr(e: &Expr, rename: &BTreeMap<&str, String>) -> Expr {
    let kind = match &e.kind {
        ExprKind::Number(n) => ExprKind::Number(*n),
        ExprKind::Bool(b) => ExprKind::Bool(*b),
        ExprKind::Ref(name) => ExprKind::Ref(renamed(name, rename)),
        ExprKind::Not(x) => ExprKind::Not(Box::new(rename_expr(x, rename))),
        ExprKind::Binary(op, a, b) => ExprKind::Binary(
            *op,
            Box::new(rename_expr(a, rename)),
            Box::new(rename_expr(b, rename)),
        ),
        ExprKind::IfThenElse { cond, then, otherwise } => ExprKind::IfThenElse {
            cond: Box::new(rename_expr(cond, rename)),
            then: Box::new(rename_expr(then, rename)),
            otherwise: otherwise.as_ref().map(|o| Box::new(rename_expr(o, rename))),
        },
        ExprKind::Call(f, args) => {
            ExprKind::Call(*f, args.iter().map(|a| rename_expr(a, rename)).collect())
        }
    };
    Expr { kind, span: e.span }
}

fn rename_artifact(artifact: &ArtifactDef, rename: &BTreeMap<&str, String>) -> ArtifactDef {
    match artifact {
        ArtifactDef::Rule(d) => ArtifactDef::Rule(RuleDef {
            name: renamed(&d.name, rename),
            context: rename_list(&d.context, rename),
            body: rename_expr(&d.body, rename),
            span: d.span,
        }),
        ArtifactDef::Function(d) => ArtifactDef::Function(FunctionDef {
            name: renamed(&d.name, rename),
            context: rename_list(&d.context, rename),
            body: rename_expr(&d.body, rename),
            span: d.span,
        }),
        ArtifactDef::Metric(d) => ArtifactDef::Metric(MetricDef {
            name: renamed(&d.name, rename),
            context: renamed(&d.context, rename),
            base: d.base.clone(),
            filter: d.filter,
            span: d.span,
        }),
        ArtifactDef::TimeRoutine(d) => ArtifactDef::TimeRoutine(TimeRoutineDef {
            name: renamed(&d.name, rename),
            fields: d.fields.clone(),
            includes: rename_list(&d.includes, rename),
            excludes: rename_list(&d.excludes, rename),
            span: d.span,
        }),
        ArtifactDef::Characteristic(d) => ArtifactDef::Characteristic(CharacteristicDef {
            name: renamed(&d.name, rename),
            x_sensor: renamed(&d.x_sensor, rename),
            y_sensor: renamed(&d.y_sensor, rename),
            lower: d.lower.clone(),
            upper: d.upper.clone(),
            span: d.span,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::format::format_spec;
    use super::super::parser::parse_spec;
    use super::super::validate::validate_spec;
    use super::*;

    fn catalog() -> Vec<SensorMeta> {
        vec![
            SensorMeta::numeric("i1"),
            SensorMeta::numeric("i4"),
            SensorMeta::numeric("j1"),
            SensorMeta::numeric("j4"),
            SensorMeta::logic("pump"),
        ]
    }

    fn circuit_template() -> TemplateDef {
        let spec = parse_spec(
            "template Circuit(supply_temp numeric, valve_pos numeric) {\n\
             function load context(valve_pos) { valve_pos / 100 }\n\
             rule SupplyOk context(supply_temp, valve_pos) {\n\
             valve_pos > 5 IMPLIES supply_temp > 30 AND Allowed AND load < 1 }\n\
             timeroutine Allowed { hour 6-20 }\n}",
        )
        .unwrap();
        spec.templates[0].clone()
    }

    fn bind(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn placeholders_become_concrete_sensors() {
        let arts = instantiate_template(
            &circuit_template(),
            &bind(&[("supply_temp", "i1"), ("valve_pos", "i4")]),
            "ahu1.",
            &catalog(),
        )
        .unwrap();
        assert_eq!(arts.len(), 3);
        let rule = arts
            .iter()
            .find_map(|a| match a {
                ArtifactDef::Rule(d) => Some(d),
                _ => None,
            })
            .unwrap();
        assert_eq!(rule.name, "ahu1.SupplyOk");
        assert_eq!(rule.context, ["i1", "i4"]);
        let mut refs = Vec::new();
        rule.body.for_each_ref(&mut |n, _| refs.push(n.to_string()));
        assert_eq!(refs, ["i4", "i1", "ahu1.Allowed", "ahu1.load"]);
    }

    #[test]
    fn missing_binding_is_named() {
        let err = instantiate_template(
            &circuit_template(),
            &bind(&[("supply_temp", "i1")]),
            "x.",
            &catalog(),
        )
        .unwrap_err();
        assert_eq!(err, TemplateError::UnboundPlaceholder("valve_pos".into()));
    }

    #[test]
    fn two_instances_have_disjoint_names_and_validate() {
        let tmpl = circuit_template();
        let a = instantiate_template(
            &tmpl,
            &bind(&[("supply_temp", "i1"), ("valve_pos", "i4")]),
            "ahu1.",
            &catalog(),
        )
        .unwrap();
        let b = instantiate_template(
            &tmpl,
            &bind(&[("supply_temp", "j1"), ("valve_pos", "j4")]),
            "ahu2.",
            &catalog(),
        )
        .unwrap();
        let names_a: BTreeSet<&str> = a.iter().map(|x| x.name()).collect();
        let names_b: BTreeSet<&str> = b.iter().map(|x| x.name()).collect();
        assert!(names_a.is_disjoint(&names_b));

        let mut spec = Specification::default();
        spec.artifacts.extend(a);
        spec.artifacts.extend(b);
        let diags = validate_spec(&spec, &catalog());
        assert!(!diags.has_errors(), "{diags}");
        // The stamped-out artifacts also survive a print/parse cycle.
        let text = format_spec(&spec);
        assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn kind_mismatch_and_unknown_sensor() {
        let err = instantiate_template(
            &circuit_template(),
            &bind(&[("supply_temp", "pump"), ("valve_pos", "i4")]),
            "x.",
            &catalog(),
        )
        .unwrap_err();
        assert!(matches!(err, TemplateError::KindMismatch { .. }));
        let err = instantiate_template(
            &circuit_template(),
            &bind(&[("supply_temp", "nope"), ("valve_pos", "i4")]),
            "x.",
            &catalog(),
        )
        .unwrap_err();
        assert!(matches!(err, TemplateError::UnknownSensor { .. }));
    }

    #[test]
    fn stray_binding_is_rejected() {
        let err = instantiate_template(
            &circuit_template(),
            &bind(&[("supply_temp", "i1"), ("valve_pos", "i4"), ("typo", "i1")]),
            "x.",
            &catalog(),
        )
        .unwrap_err();
        assert_eq!(err, TemplateError::UnknownBinding("typo".into()));
    }

    #[test]
    fn prefixed_name_colliding_with_sensor_is_rejected() {
        let mut cat = catalog();
        cat.push(SensorMeta::numeric("ahu1.load"));
        let err = instantiate_template(
            &circuit_template(),
            &bind(&[("supply_temp", "i1"), ("valve_pos", "i4")]),
            "ahu1.",
            &cat,
        )
        .unwrap_err();
        assert_eq!(err, TemplateError::NameCollision("ahu1.load".into()));
    }
}
