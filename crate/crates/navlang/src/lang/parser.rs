use std::collections::BTreeSet;

use crate::timeseries::{SensorMeta, SeriesKind};

use super::ast::*;
use super::lexer::{Lexer, Tok, Token};
use super::{Diagnostics, Span};

/// Parse specification source into a [`Specification`].
///
/// All problems found are reported together; any error makes the result
/// `Err`. Recovery skips to the next top-level declaration so one broken
/// artifact does not hide problems in the rest of the file.
pub fn parse_spec(text: &str) -> Result<Specification, Diagnostics> {
    let tokens = match Lexer::new(text).run() {
        Ok(tokens) => tokens,
        Err(d) => return Err(Diagnostics { items: vec![d] }),
    };
    let mut parser = Parser { toks: tokens, pos: 0, diags: Diagnostics::new() };
    let spec = parser.spec_file();
    if parser.diags.has_errors() {
        Err(parser.diags)
    } else {
        Ok(spec)
    }
}

const ITEM_KEYWORDS: [&str; 8] =
    ["grid", "sensor", "rule", "function", "metric", "timeroutine", "characteristic", "template"];

const WEEKDAYS: [&str; 7] =
    ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"];

pub(super) fn weekday_name(n: u32) -> &'static str {
    WEEKDAYS[(n as usize - 1) % 7]
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    diags: Diagnostics,
}

/// Parsers return `Err(())` after recording a diagnostic; the item loop then
/// resynchronizes at the next declaration keyword.
type Parsed<T> = Result<T, ()>;

impl Parser {
    fn cur(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn cur_span(&self) -> Span {
        self.cur().span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.cur().tok == tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.at(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(&self.cur().tok, Tok::Ident(s) if s == word)
    }

    fn eat_ident(&mut self, word: &str) -> bool {
        if self.at_ident(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_here(&mut self, message: impl Into<String>) {
        let span = self.cur_span();
        self.diags.error(span, message);
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Parsed<Span> {
        if self.at(&tok) {
            Ok(self.bump().span)
        } else {
            let found = self.cur().tok.describe();
            self.error_here(format!("expected {what}, found {found}"));
            Err(())
        }
    }

    fn expect_name(&mut self, what: &str) -> Parsed<(String, Span)> {
        match &self.cur().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump().span))
            }
            other => {
                let found = other.describe();
                self.error_here(format!("expected {what}, found {found}"));
                Err(())
            }
        }
    }

    fn expect_integer(&mut self, what: &str) -> Parsed<(u32, Span)> {
        if let Tok::Number(n) = self.cur().tok {
            if n.fract() == 0.0 && (0.0..=u32::MAX as f64).contains(&n) {
                return Ok((n as u32, self.bump().span));
            }
        }
        let found = self.cur().tok.describe();
        self.error_here(format!("expected {what}, found {found}"));
        Err(())
    }

    fn signed_number(&mut self) -> Parsed<(f64, Span)> {
        let neg = self.at(&Tok::Minus).then(|| self.bump().span);
        if let Tok::Number(n) = self.cur().tok {
            let t = self.bump();
            let span = neg.map_or(t.span, |s| s.merge(t.span));
            return Ok((if neg.is_some() { -n } else { n }, span));
        }
        let found = self.cur().tok.describe();
        self.error_here(format!("expected a number, found {found}"));
        Err(())
    }

    /// Skip to the next plausible declaration start (or end of input).
    fn synchronize(&mut self) {
        let mut depth = 0usize;
        loop {
            match &self.cur().tok {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth = depth.saturating_sub(1),
                Tok::Ident(s) if depth == 0 && ITEM_KEYWORDS.contains(&s.as_str()) => return,
                _ => {}
            }
            self.bump();
        }
    }

    fn spec_file(&mut self) -> Specification {
        let mut spec = Specification::default();
        let mut names: BTreeSet<String> = BTreeSet::new();
        let claim = |names: &mut BTreeSet<String>,
                         diags: &mut Diagnostics,
                         name: &str,
                         span: Span| {
            if names.insert(name.to_string()) {
                true
            } else {
                diags.error(span, format!("duplicate name `{name}`"));
                false
            }
        };
        while !self.at(&Tok::Eof) {
            // Each arm consumes the introducing keyword before dispatching.
            let outcome: Parsed<()> = if self.eat_ident("grid") {
                self.grid_directive(&mut spec)
            } else if self.eat_ident("sensor") {
                self.sensor_decl().map(|decl| {
                    if claim(&mut names, &mut self.diags, &decl.meta.id, decl.span) {
                        spec.sensors.push(decl);
                    }
                })
            } else if self.eat_ident("template") {
                self.template_def().map(|t| {
                    if claim(&mut names, &mut self.diags, &t.name, t.span) {
                        spec.templates.push(t);
                    }
                })
            } else if let Some(kind) = self.peek_artifact_keyword() {
                self.bump();
                self.artifact_def(kind).map(|a| {
                    if claim(&mut names, &mut self.diags, a.name(), a.span()) {
                        spec.artifacts.push(a);
                    }
                })
            } else {
                self.error_here(format!(
                    "expected a declaration (one of {}), found {}",
                    ITEM_KEYWORDS.join(", "),
                    self.cur().tok.describe()
                ));
                self.bump();
                Err(())
            };
            if outcome.is_err() {
                self.synchronize();
            }
        }
        spec
    }

    fn peek_artifact_keyword(&self) -> Option<ArtifactKind> {
        let Tok::Ident(word) = &self.cur().tok else { return None };
        Some(match word.as_str() {
            "rule" => ArtifactKind::Rule,
            "function" => ArtifactKind::Function,
            "metric" => ArtifactKind::Metric,
            "timeroutine" => ArtifactKind::TimeRoutine,
            "characteristic" => ArtifactKind::Characteristic,
            _ => return None,
        })
    }

    fn artifact_def(&mut self, kind: ArtifactKind) -> Parsed<ArtifactDef> {
        Ok(match kind {
            ArtifactKind::Rule => {
                let (name, context, body, span) = self.rule_like("rule")?;
                ArtifactDef::Rule(RuleDef { name, context, body, span })
            }
            ArtifactKind::Function => {
                let (name, context, body, span) = self.rule_like("function")?;
                ArtifactDef::Function(FunctionDef { name, context, body, span })
            }
            ArtifactKind::Metric => ArtifactDef::Metric(self.metric_def()?),
            ArtifactKind::TimeRoutine => ArtifactDef::TimeRoutine(self.timeroutine_def()?),
            ArtifactKind::Characteristic => {
                ArtifactDef::Characteristic(self.characteristic_def()?)
            }
        })
    }

    fn grid_directive(&mut self, spec: &mut Specification) -> Parsed<()> {
        let kw = self.cur_span();
        if !self.eat_ident("step") {
            let found = self.cur().tok.describe();
            self.error_here(format!("expected `step`, found {found}"));
            return Err(());
        }
        let (step, span) = self.expect_integer("grid step in seconds")?;
        if step == 0 {
            self.diags.error(span, "grid step must be positive");
            return Err(());
        }
        if spec.grid_step.is_some() {
            self.diags.error(kw.merge(span), "duplicate grid directive");
            return Err(());
        }
        spec.grid_step = Some(step as u64);
        Ok(())
    }

    fn sensor_decl(&mut self) -> Parsed<SensorDecl> {
        let (id, start) = self.expect_name("a sensor id")?;
        let (kind_word, mut end) = self.expect_name("`numeric` or `logic`")?;
        let kind = match kind_word.as_str() {
            "numeric" => SeriesKind::Numeric,
            "logic" => SeriesKind::Logic,
            other => {
                self.diags.error(end, format!("expected `numeric` or `logic`, found `{other}`"));
                return Err(());
            }
        };
        let mut meta = SensorMeta { id, label: None, unit: None, kind };
        loop {
            let field = if self.at_ident("unit") {
                "unit"
            } else if self.at_ident("label") {
                "label"
            } else {
                break;
            };
            self.bump();
            let text = match &self.cur().tok {
                Tok::Str(s) => s.clone(),
                other => {
                    let found = other.describe();
                    self.error_here(format!("expected a quoted {field}, found {found}"));
                    return Err(());
                }
            };
            end = self.bump().span;
            let slot = if field == "unit" { &mut meta.unit } else { &mut meta.label };
            if slot.is_some() {
                self.diags.error(end, format!("duplicate `{field}`"));
                return Err(());
            }
            *slot = Some(text);
        }
        Ok(SensorDecl { meta, span: start.merge(end) })
    }

    /// Shared shape of rule and function definitions:
    /// `NAME [context(id, ...)] { expr }`.
    fn rule_like(&mut self, what: &str) -> Parsed<(String, Vec<String>, Expr, Span)> {
        let (name, start) = self.expect_name(&format!("a {what} name"))?;
        let context = if self.eat_ident("context") { self.context_list()? } else { Vec::new() };
        self.expect(Tok::LBrace, "`{`")?;
        let body = self.expr()?;
        let end = self.expect(Tok::RBrace, "`}`")?;
        Ok((name, context, body, start.merge(end)))
    }

    fn context_list(&mut self) -> Parsed<Vec<String>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut ids = Vec::new();
        if !self.at(&Tok::RParen) {
            loop {
                ids.push(self.expect_name("a sensor id")?.0);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(ids)
    }

    fn metric_def(&mut self) -> Parsed<MetricDef> {
        let (name, start) = self.expect_name("a metric name")?;
        if !self.eat_ident("context") {
            let found = self.cur().tok.describe();
            self.error_here(format!("expected `context`, found {found}"));
            return Err(());
        }
        self.expect(Tok::LParen, "`(`")?;
        let (context, _) = self.expect_name("a sensor or artifact name")?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let base = self.metric_base()?;
        let (filter_word, filter_span) = self.expect_name("a time filter")?;
        let Some(filter) = TimeFilter::from_name(&filter_word) else {
            let names: Vec<&str> = TimeFilter::ALL.iter().map(|f| f.name()).collect();
            self.diags.error(
                filter_span,
                format!("unknown time filter `{filter_word}`; one of {} expected", names.join(", ")),
            );
            return Err(());
        };
        let end = self.expect(Tok::RBrace, "`}`")?;
        Ok(MetricDef { name, context, base, filter, span: start.merge(end) })
    }

    fn metric_base(&mut self) -> Parsed<MetricBase> {
        match self.cur().tok.clone() {
            Tok::Average => {
                self.bump();
                Ok(MetricBase::Average)
            }
            Tok::Sum => {
                self.bump();
                Ok(MetricBase::Sum)
            }
            Tok::Maximum => {
                self.bump();
                Ok(MetricBase::Maximum)
            }
            Tok::Ident(word) if word == "MINIMUM" => {
                self.bump();
                Ok(MetricBase::Minimum)
            }
            Tok::Ident(word) => {
                self.bump();
                let mut params = Vec::new();
                if self.eat(&Tok::LParen) {
                    if !self.at(&Tok::RParen) {
                        loop {
                            params.push(self.signed_number()?.0);
                            if !self.eat(&Tok::Comma) {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen, "`)`")?;
                }
                Ok(MetricBase::Named { name: word, params })
            }
            other => {
                let found = other.describe();
                self.error_here(format!("expected an aggregate, found {found}"));
                Err(())
            }
        }
    }

    fn timeroutine_def(&mut self) -> Parsed<TimeRoutineDef> {
        let (name, start) = self.expect_name("a time routine name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut def = TimeRoutineDef {
            name,
            fields: RoutineFields::default(),
            includes: Vec::new(),
            excludes: Vec::new(),
            span: start,
        };
        let mut seen: BTreeSet<String> = BTreeSet::new();
        while !self.at(&Tok::RBrace) {
            let (word, word_span) = self.expect_name("a calendar field, `include` or `exclude`")?;
            match word.as_str() {
                "include" | "exclude" => {
                    let list =
                        if word == "include" { &mut def.includes } else { &mut def.excludes };
                    loop {
                        list.push(self.expect_name("a time routine name")?.0);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                "year" | "month" | "day" | "dayofweek" | "hour" | "minute" | "second" => {
                    if !seen.insert(word.clone()) {
                        self.diags.error(word_span, format!("duplicate field `{word}`"));
                        return Err(());
                    }
                    let pattern = self.pattern(&word)?;
                    *field_slot(&mut def.fields, &word) = pattern;
                }
                other => {
                    self.diags.error(
                        word_span,
                        format!("unknown time routine entry `{other}`"),
                    );
                    return Err(());
                }
            }
        }
        let end = self.expect(Tok::RBrace, "`}`")?;
        def.span = start.merge(end);
        Ok(def)
    }

    fn pattern(&mut self, field: &str) -> Parsed<Pattern> {
        if self.eat(&Tok::Star) {
            return Ok(Pattern::Any);
        }
        let mut parts = vec![self.pattern_part(field)?];
        while self.eat(&Tok::Comma) {
            parts.push(self.pattern_part(field)?);
        }
        Ok(Pattern::Parts(parts))
    }

    fn pattern_part(&mut self, field: &str) -> Parsed<PatternPart> {
        let lo = self.pattern_value(field)?;
        if self.eat(&Tok::Minus) {
            Ok(PatternPart::Range(lo, self.pattern_value(field)?))
        } else {
            Ok(PatternPart::Value(lo))
        }
    }

    fn pattern_value(&mut self, field: &str) -> Parsed<u32> {
        if field == "dayofweek" {
            if let Tok::Ident(word) = &self.cur().tok {
                let word = word.clone();
                if let Some(i) = WEEKDAYS.iter().position(|w| *w == word) {
                    self.bump();
                    return Ok(i as u32 + 1);
                }
                self.error_here(format!("unknown weekday `{word}`"));
                return Err(());
            }
        }
        Ok(self.expect_integer(&format!("a {field} value"))?.0)
    }

    fn characteristic_def(&mut self) -> Parsed<CharacteristicDef> {
        let (name, start) = self.expect_name("a characteristic name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut x_sensor = None;
        let mut y_sensor = None;
        let mut lower = None;
        let mut upper = None;
        while !self.at(&Tok::RBrace) {
            let (word, word_span) = self.expect_name("`x`, `y`, `lower` or `upper`")?;
            let duplicate = match word.as_str() {
                "x" => x_sensor.replace(self.expect_name("a sensor id")?.0).is_some(),
                "y" => y_sensor.replace(self.expect_name("a sensor id")?.0).is_some(),
                "lower" => lower.replace(self.point_list()?).is_some(),
                "upper" => upper.replace(self.point_list()?).is_some(),
                other => {
                    self.diags
                        .error(word_span, format!("unknown characteristic entry `{other}`"));
                    return Err(());
                }
            };
            if duplicate {
                self.diags.error(word_span, format!("duplicate `{word}`"));
                return Err(());
            }
        }
        let end = self.expect(Tok::RBrace, "`}`")?;
        let span = start.merge(end);
        let (Some(x_sensor), Some(y_sensor)) = (x_sensor, y_sensor) else {
            self.diags.error(span, "characteristic needs both `x` and `y` sensors");
            return Err(());
        };
        Ok(CharacteristicDef {
            name,
            x_sensor,
            y_sensor,
            lower: lower.unwrap_or_default(),
            upper: upper.unwrap_or_default(),
            span,
        })
    }

    fn point_list(&mut self) -> Parsed<Vec<(f64, f64)>> {
        let mut points = Vec::new();
        while self.eat(&Tok::LParen) {
            let x = self.signed_number()?.0;
            self.expect(Tok::Comma, "`,`")?;
            let y = self.signed_number()?.0;
            self.expect(Tok::RParen, "`)`")?;
            points.push((x, y));
        }
        if points.is_empty() {
            let found = self.cur().tok.describe();
            self.error_here(format!("expected at least one `(x, y)` point, found {found}"));
            return Err(());
        }
        Ok(points)
    }

    fn template_def(&mut self) -> Parsed<TemplateDef> {
        let (name, start) = self.expect_name("a template name")?;
        self.expect(Tok::LParen, "`(`")?;
        let mut params = Vec::new();
        if !self.at(&Tok::RParen) {
            loop {
                let (pname, pspan) = self.expect_name("a placeholder name")?;
                let (kind_word, kspan) = self.expect_name("`numeric` or `logic`")?;
                let kind = match kind_word.as_str() {
                    "numeric" => SeriesKind::Numeric,
                    "logic" => SeriesKind::Logic,
                    other => {
                        self.diags
                            .error(kspan, format!("expected `numeric` or `logic`, found `{other}`"));
                        return Err(());
                    }
                };
                params.push(TemplateParam { name: pname, kind, span: pspan.merge(kspan) });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut body: Vec<ArtifactDef> = Vec::new();
        let mut names: BTreeSet<String> = BTreeSet::new();
        while !self.at(&Tok::RBrace) {
            let Some(kind) = self.peek_artifact_keyword() else {
                let found = self.cur().tok.describe();
                self.error_here(format!("expected an artifact definition, found {found}"));
                return Err(());
            };
            self.bump();
            let artifact = self.artifact_def(kind)?;
            if !names.insert(artifact.name().to_string()) {
                self.diags
                    .error(artifact.span(), format!("duplicate name `{}`", artifact.name()));
                return Err(());
            }
            body.push(artifact);
        }
        let end = self.expect(Tok::RBrace, "`}`")?;
        Ok(TemplateDef { name, params, body, span: start.merge(end) })
    }

    // ----- expressions -------------------------------------------------

    fn expr(&mut self) -> Parsed<Expr> {
        self.ite()
    }

    fn ite(&mut self) -> Parsed<Expr> {
        if !self.at(&Tok::If) {
            return self.implies();
        }
        let start = self.bump().span;
        let cond = self.implies()?;
        self.expect(Tok::Then, "`THEN`")?;
        let then = self.ite()?;
        let otherwise = if self.eat(&Tok::Else) { Some(self.ite()?) } else { None };
        let end = otherwise.as_ref().unwrap_or(&then).span;
        Ok(Expr {
            span: start.merge(end),
            kind: ExprKind::IfThenElse {
                cond: Box::new(cond),
                then: Box::new(then),
                otherwise: otherwise.map(Box::new),
            },
        })
    }

    fn implies(&mut self) -> Parsed<Expr> {
        let lhs = self.or()?;
        if self.eat(&Tok::Implies) {
            // Right-associative: a IMPLIES b IMPLIES c == a IMPLIES (b IMPLIES c).
            let rhs = self.implies()?;
            Ok(binary(BinOp::Implies, lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Parsed<Expr> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = binary(BinOp::Or, lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Parsed<Expr> {
        let mut lhs = self.comparison()?;
        while self.eat(&Tok::And) {
            lhs = binary(BinOp::And, lhs, self.comparison()?);
        }
        Ok(lhs)
    }

    fn comparison_op(&self) -> Option<BinOp> {
        Some(match self.cur().tok {
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            Tok::EqEq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            _ => return None,
        })
    }

    fn comparison(&mut self) -> Parsed<Expr> {
        let lhs = self.additive()?;
        let Some(op) = self.comparison_op() else { return Ok(lhs) };
        self.bump();
        let rhs = self.additive()?;
        if self.comparison_op().is_some() {
            self.error_here("comparisons cannot be chained; parenthesize the intended grouping");
            return Err(());
        }
        Ok(binary(op, lhs, rhs))
    }

    fn additive(&mut self) -> Parsed<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = if self.eat(&Tok::Plus) {
                BinOp::Add
            } else if self.eat(&Tok::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = binary(op, lhs, self.multiplicative()?);
        }
    }

    fn multiplicative(&mut self) -> Parsed<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(&Tok::Star) {
                BinOp::Mul
            } else if self.eat(&Tok::Slash) {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Parsed<Expr> {
        if self.at(&Tok::Not) {
            let start = self.bump().span;
            let operand = self.unary()?;
            let span = start.merge(operand.span);
            return Ok(Expr { kind: ExprKind::Not(Box::new(operand)), span });
        }
        self.primary()
    }

    fn primary(&mut self) -> Parsed<Expr> {
        let lib = match self.cur().tok {
            Tok::Maximum => Some(LibFn::Maximum),
            Tok::Sum => Some(LibFn::Sum),
            Tok::Average => Some(LibFn::Average),
            _ => None,
        };
        if let Some(f) = lib {
            let start = self.bump().span;
            self.expect(Tok::LParen, "`(`")?;
            let mut args = vec![self.expr()?];
            while self.eat(&Tok::Comma) {
                args.push(self.expr()?);
            }
            let end = self.expect(Tok::RParen, "`)`")?;
            return Ok(Expr { kind: ExprKind::Call(f, args), span: start.merge(end) });
        }
        match self.cur().tok.clone() {
            Tok::Number(n) => {
                let span = self.bump().span;
                Ok(Expr { kind: ExprKind::Number(n), span })
            }
            Tok::Minus => {
                // Unary minus exists only as a sign on a numeric literal.
                let (n, span) = self.signed_number()?;
                Ok(Expr { kind: ExprKind::Number(n), span })
            }
            Tok::True => {
                let span = self.bump().span;
                Ok(Expr { kind: ExprKind::Bool(true), span })
            }
            Tok::False => {
                let span = self.bump().span;
                Ok(Expr { kind: ExprKind::Bool(false), span })
            }
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok(Expr { kind: ExprKind::Ref(name), span })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => {
                let found = other.describe();
                self.error_here(format!("expected an expression, found {found}"));
                Err(())
            }
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = lhs.span.merge(rhs.span);
    Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span }
}

fn field_slot<'a>(fields: &'a mut RoutineFields, name: &str) -> &'a mut Pattern {
    match name {
        "year" => &mut fields.year,
        "month" => &mut fields.month,
        "day" => &mut fields.day,
        "dayofweek" => &mut fields.dayofweek,
        "hour" => &mut fields.hour,
        "minute" => &mut fields.minute,
        "second" => &mut fields.second,
        _ => unreachable!("caller screens field names"),
    }
}
