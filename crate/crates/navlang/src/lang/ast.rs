use serde::{Deserialize, Serialize};

use crate::timeseries::{SensorMeta, SeriesKind};

use super::Span;

/// Expression node. Spans compare equal by definition, so derived equality
/// over expressions is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Bool(bool),
    /// Reference to a context sensor or another artifact by name.
    Ref(String),
    Not(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    IfThenElse {
        cond: Box<Expr>,
        then: Box<Expr>,
        /// Omitted ELSE means the constraint holds vacuously (logic true).
        otherwise: Option<Box<Expr>>,
    },
    /// Pointwise library function over one or more numeric arguments.
    Call(LibFn, Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "AND",
            BinOp::Or => "OR",
            BinOp::Implies => "IMPLIES",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne)
    }

    pub fn is_arithmetic(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div)
    }

    pub fn is_connective(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or | BinOp::Implies)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LibFn {
    Maximum,
    Sum,
    Average,
}

impl LibFn {
    pub fn name(self) -> &'static str {
        match self {
            LibFn::Maximum => "MAXIMUM",
            LibFn::Sum => "SUM",
            LibFn::Average => "AVERAGE",
        }
    }
}

impl Expr {
    pub fn number(v: f64) -> Expr {
        Expr { kind: ExprKind::Number(v), span: Span::default() }
    }

    pub fn boolean(v: bool) -> Expr {
        Expr { kind: ExprKind::Bool(v), span: Span::default() }
    }

    pub fn reference(name: impl Into<String>) -> Expr {
        Expr { kind: ExprKind::Ref(name.into()), span: Span::default() }
    }

    // Constructor named after the language keyword, like the others here.
    #[allow(clippy::should_implement_trait)]
    pub fn not(operand: Expr) -> Expr {
        Expr { kind: ExprKind::Not(Box::new(operand)), span: Span::default() }
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span: Span::default() }
    }

    pub fn ite(cond: Expr, then: Expr, otherwise: Option<Expr>) -> Expr {
        Expr {
            kind: ExprKind::IfThenElse {
                cond: Box::new(cond),
                then: Box::new(then),
                otherwise: otherwise.map(Box::new),
            },
            span: Span::default(),
        }
    }

    pub fn call(f: LibFn, args: Vec<Expr>) -> Expr {
        Expr { kind: ExprKind::Call(f, args), span: Span::default() }
    }

    /// Visit every reference leaf, left to right.
    pub fn for_each_ref<'a>(&'a self, f: &mut impl FnMut(&'a str, Span)) {
        match &self.kind {
            ExprKind::Number(_) | ExprKind::Bool(_) => {}
            ExprKind::Ref(name) => f(name, self.span),
            ExprKind::Not(e) => e.for_each_ref(f),
            ExprKind::Binary(_, a, b) => {
                a.for_each_ref(f);
                b.for_each_ref(f);
            }
            ExprKind::IfThenElse { cond, then, otherwise } => {
                cond.for_each_ref(f);
                then.for_each_ref(f);
                if let Some(e) = otherwise {
                    e.for_each_ref(f);
                }
            }
            ExprKind::Call(_, args) => {
                for a in args {
                    a.for_each_ref(f);
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleDef {
    pub name: String,
    pub context: Vec<String>,
    pub body: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionDef {
    pub name: String,
    pub context: Vec<String>,
    pub body: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricBase {
    Average,
    Sum,
    Maximum,
    Minimum,
    /// Library aggregate addressed by name, e.g. STDDEV or PERCENTILE(95).
    Named { name: String, params: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeFilter {
    PerHour,
    PerDay,
    PerWeek,
    PerMonth,
    PerQuarter,
    PerYear,
}

impl TimeFilter {
    pub const ALL: [TimeFilter; 6] = [
        TimeFilter::PerHour,
        TimeFilter::PerDay,
        TimeFilter::PerWeek,
        TimeFilter::PerMonth,
        TimeFilter::PerQuarter,
        TimeFilter::PerYear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TimeFilter::PerHour => "PerHour",
            TimeFilter::PerDay => "PerDay",
            TimeFilter::PerWeek => "PerWeek",
            TimeFilter::PerMonth => "PerMonth",
            TimeFilter::PerQuarter => "PerQuarter",
            TimeFilter::PerYear => "PerYear",
        }
    }

    pub fn from_name(name: &str) -> Option<TimeFilter> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricDef {
    pub name: String,
    /// One numeric sensor or artifact the metric aggregates.
    pub context: String,
    pub base: MetricBase,
    pub filter: TimeFilter,
    pub span: Span,
}

/// Calendar field pattern: match anything, or any of a list of values and
/// inclusive ranges.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Pattern {
    #[default]
    Any,
    Parts(Vec<PatternPart>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternPart {
    Value(u32),
    Range(u32, u32),
}

impl Pattern {
    pub fn matches(&self, v: u32) -> bool {
        match self {
            Pattern::Any => true,
            Pattern::Parts(parts) => parts.iter().any(|p| match *p {
                PatternPart::Value(x) => v == x,
                PatternPart::Range(lo, hi) => lo <= v && v <= hi,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RoutineFields {
    pub year: Pattern,
    pub month: Pattern,
    pub day: Pattern,
    pub dayofweek: Pattern,
    pub hour: Pattern,
    pub minute: Pattern,
    pub second: Pattern,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeRoutineDef {
    pub name: String,
    pub fields: RoutineFields,
    pub includes: Vec<String>,
    pub excludes: Vec<String>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicDef {
    pub name: String,
    pub x_sensor: String,
    pub y_sensor: String,
    /// Lower bound polyline, strictly increasing in x; may be empty.
    pub lower: Vec<(f64, f64)>,
    /// Upper bound polyline, strictly increasing in x; may be empty.
    pub upper: Vec<(f64, f64)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemplateParam {
    pub name: String,
    pub kind: SeriesKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemplateDef {
    pub name: String,
    pub params: Vec<TemplateParam>,
    pub body: Vec<ArtifactDef>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ArtifactDef {
    Rule(RuleDef),
    Function(FunctionDef),
    Metric(MetricDef),
    TimeRoutine(TimeRoutineDef),
    Characteristic(CharacteristicDef),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArtifactKind {
    Rule,
    Function,
    Metric,
    TimeRoutine,
    Characteristic,
}

impl ArtifactKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ArtifactKind::Rule => "rule",
            ArtifactKind::Function => "function",
            ArtifactKind::Metric => "metric",
            ArtifactKind::TimeRoutine => "timeroutine",
            ArtifactKind::Characteristic => "characteristic",
        }
    }
}

impl ArtifactDef {
    pub fn name(&self) -> &str {
        match self {
            ArtifactDef::Rule(d) => &d.name,
            ArtifactDef::Function(d) => &d.name,
            ArtifactDef::Metric(d) => &d.name,
            ArtifactDef::TimeRoutine(d) => &d.name,
            ArtifactDef::Characteristic(d) => &d.name,
        }
    }

    pub fn kind(&self) -> ArtifactKind {
        match self {
            ArtifactDef::Rule(_) => ArtifactKind::Rule,
            ArtifactDef::Function(_) => ArtifactKind::Function,
            ArtifactDef::Metric(_) => ArtifactKind::Metric,
            ArtifactDef::TimeRoutine(_) => ArtifactKind::TimeRoutine,
            ArtifactDef::Characteristic(_) => ArtifactKind::Characteristic,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            ArtifactDef::Rule(d) => d.span,
            ArtifactDef::Function(d) => d.span,
            ArtifactDef::Metric(d) => d.span,
            ArtifactDef::TimeRoutine(d) => d.span,
            ArtifactDef::Characteristic(d) => d.span,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SensorDecl {
    pub meta: SensorMeta,
    pub span: Span,
}

/// A parsed specification: sensor declarations, artifact definitions in
/// source order, templates, and the optional target grid step.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Specification {
    pub grid_step: Option<u64>,
    pub sensors: Vec<SensorDecl>,
    pub artifacts: Vec<ArtifactDef>,
    pub templates: Vec<TemplateDef>,
}

impl Specification {
    pub fn is_empty(&self) -> bool {
        self.grid_step.is_none()
            && self.sensors.is_empty()
            && self.artifacts.is_empty()
            && self.templates.is_empty()
    }

    pub fn find_sensor(&self, id: &str) -> Option<&SensorMeta> {
        self.sensors.iter().map(|s| &s.meta).find(|m| m.id == id)
    }

    pub fn find_artifact(&self, name: &str) -> Option<&ArtifactDef> {
        self.artifacts.iter().find(|a| a.name() == name)
    }

    pub fn find_template(&self, name: &str) -> Option<&TemplateDef> {
        self.templates.iter().find(|t| t.name == name)
    }

    pub fn artifact_kind(&self, name: &str) -> Option<ArtifactKind> {
        self.find_artifact(name).map(|a| a.kind())
    }

    pub fn rules(&self) -> impl Iterator<Item = &RuleDef> {
        self.artifacts.iter().filter_map(|a| match a {
            ArtifactDef::Rule(d) => Some(d),
            _ => None,
        })
    }

    pub fn functions(&self) -> impl Iterator<Item = &FunctionDef> {
        self.artifacts.iter().filter_map(|a| match a {
            ArtifactDef::Function(d) => Some(d),
            _ => None,
        })
    }

    pub fn metrics(&self) -> impl Iterator<Item = &MetricDef> {
        self.artifacts.iter().filter_map(|a| match a {
            ArtifactDef::Metric(d) => Some(d),
            _ => None,
        })
    }

    pub fn time_routines(&self) -> impl Iterator<Item = &TimeRoutineDef> {
        self.artifacts.iter().filter_map(|a| match a {
            ArtifactDef::TimeRoutine(d) => Some(d),
            _ => None,
        })
    }

    pub fn characteristics(&self) -> impl Iterator<Item = &CharacteristicDef> {
        self.artifacts.iter().filter_map(|a| match a {
            ArtifactDef::Characteristic(d) => Some(d),
            _ => None,
        })
    }

    /// Merge another parsed file into this specification. Name clashes are
    /// left in place for validation to report.
    pub fn merge(&mut self, other: Specification) {
        if self.grid_step.is_none() {
            self.grid_step = other.grid_step;
        }
        self.sensors.extend(other.sensors);
        self.artifacts.extend(other.artifacts);
        self.templates.extend(other.templates);
    }
}
