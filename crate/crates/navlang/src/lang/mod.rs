//! The constraint language: concrete syntax, syntax tree, canonical
//! formatter, validation, reference graph, and template instantiation.
//!
//! Source files (`.nav`) are UTF-8 with `#` line comments. Upper-case
//! operator words (`IF`, `AND`, `NOT`, ...) are reserved; block keywords
//! (`rule`, `sensor`, ...) are contextual. Operator precedence, tightest
//! first: `NOT`; `*` `/`; `+` `-`; comparisons (non-chaining); `AND`; `OR`;
//! `IMPLIES` (right-associative); `IF`-`THEN`-`ELSE`.

mod ast;
mod diag;
mod format;
mod graph;
mod lexer;
mod parser;
mod template;
mod validate;

pub use ast::{
    ArtifactDef, ArtifactKind, BinOp, CharacteristicDef, Expr, ExprKind, FunctionDef, LibFn,
    MetricBase, MetricDef, Pattern, PatternPart, RoutineFields, RuleDef, SensorDecl,
    Specification, TemplateDef, TemplateParam, TimeFilter, TimeRoutineDef,
};
pub use diag::{Diagnostic, Diagnostics, Severity, Span};
pub use format::{format_expr, format_spec};
pub use graph::{build_dependency_graph, DependencyGraph};
pub use parser::parse_spec;
pub use template::{instantiate_template, TemplateError};
pub use validate::validate_spec;
