use super::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    // Reserved upper-case words.
    If,
    Then,
    Else,
    And,
    Or,
    Implies,
    Not,
    Maximum,
    Sum,
    Average,
    True,
    False,
    // Punctuation and operators.
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Star,
    Slash,
    Plus,
    Minus,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    Eof,
}

impl Tok {
    /// How the token reads in messages like "expected X, found Y".
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::Str(_) => "string literal".to_string(),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::If => "IF",
            Tok::Then => "THEN",
            Tok::Else => "ELSE",
            Tok::And => "AND",
            Tok::Or => "OR",
            Tok::Implies => "IMPLIES",
            Tok::Not => "NOT",
            Tok::Maximum => "MAXIMUM",
            Tok::Sum => "SUM",
            Tok::Average => "AVERAGE",
            Tok::True => "true",
            Tok::False => "false",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            Tok::Ne => "!=",
            Tok::Ident(_) | Tok::Number(_) | Tok::Str(_) | Tok::Eof => unreachable!(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "IF" => Tok::If,
        "THEN" => Tok::Then,
        "ELSE" => Tok::Else,
        "AND" => Tok::And,
        "OR" => Tok::Or,
        "IMPLIES" => Tok::Implies,
        "NOT" => Tok::Not,
        "MAXIMUM" => Tok::Maximum,
        "SUM" => Tok::Sum,
        "AVERAGE" => Tok::Average,
        "true" => Tok::True,
        "false" => Tok::False,
        _ => return None,
    })
}

pub struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str) -> Self {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    /// Tokenize the whole input. The token stream always ends with `Eof`.
    pub fn run(mut self) -> Result<Vec<Token>, Diagnostic> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.chars.peek() else {
                out.push(Token { tok: Tok::Eof, span: Span::new(line, col, line, col) });
                return Ok(out);
            };
            let tok = match c {
                '(' => self.single(Tok::LParen),
                ')' => self.single(Tok::RParen),
                '{' => self.single(Tok::LBrace),
                '}' => self.single(Tok::RBrace),
                ',' => self.single(Tok::Comma),
                '*' => self.single(Tok::Star),
                '/' => self.single(Tok::Slash),
                '+' => self.single(Tok::Plus),
                '-' => self.single(Tok::Minus),
                '<' => self.with_eq(Tok::Lt, Tok::Le),
                '>' => self.with_eq(Tok::Gt, Tok::Ge),
                '=' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::EqEq
                    } else {
                        return Err(self.bad(line, col, "expected `==`"));
                    }
                }
                '!' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Ne
                    } else {
                        return Err(self.bad(line, col, "expected `!=`"));
                    }
                }
                '"' => self.string(line, col)?,
                c if c.is_ascii_digit() => self.number(line, col)?,
                c if c.is_ascii_alphabetic() || c == '_' => self.word(),
                other => {
                    return Err(self.bad(line, col, format!("unexpected character `{other}`")));
                }
            };
            out.push(Token { tok, span: Span::new(line, col, self.line, self.col) });
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        match c {
            Some('\n') => {
                self.line += 1;
                self.col = 1;
            }
            Some(_) => self.col += 1,
            None => {}
        }
        c
    }

    fn single(&mut self, tok: Tok) -> Tok {
        self.bump();
        tok
    }

    fn with_eq(&mut self, bare: Tok, with: Tok) -> Tok {
        self.bump();
        if self.chars.peek() == Some(&'=') {
            self.bump();
            with
        } else {
            bare
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                return;
            }
        }
    }

    fn word(&mut self) -> Tok {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        keyword(&s).unwrap_or(Tok::Ident(s))
    }

    fn number(&mut self, line: u32, col: u32) -> Result<Tok, Diagnostic> {
        let mut s = String::new();
        while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        // Consume a fraction only when a digit follows the dot; otherwise the
        // dot belongs to whatever comes next and will error there.
        let mut probe = self.chars.clone();
        if probe.next() == Some('.') && probe.next().is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
            while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(self.bump().unwrap());
            }
        }
        s.parse::<f64>()
            .map(Tok::Number)
            .map_err(|_| self.bad(line, col, format!("invalid number `{s}`")))
    }

    fn string(&mut self, line: u32, col: u32) -> Result<Tok, Diagnostic> {
        self.bump(); // opening quote
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => {
                    return Err(self.bad(line, col, "unterminated string literal"));
                }
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    other => {
                        return Err(self.bad(
                            line,
                            col,
                            format!(
                                "unknown escape `\\{}`",
                                other.map(String::from).unwrap_or_default()
                            ),
                        ));
                    }
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn bad(&self, line: u32, col: u32, message: impl Into<String>) -> Diagnostic {
        Diagnostic::error(Span::new(line, col, self.line, self.col), message)
    }
}

/// Escape a string for canonical output.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
