//! A tiny arithmetic expression language for boundary data and forcing terms.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := number | variable | call | '(' expr ')'
//! call    := ('sin' | 'cos' | 'exp') '(' expr ')' | 'pow' '(' expr ',' expr ')'
//! ```
//!
//! Variables are `x`, `y` and, where a boundary normal exists, `nx`, `ny`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ExprError {}

impl ExprError {
    /// The source line with a caret under the offending column.
    pub fn render(&self, source: &str) -> String {
        format!(
            "  {source}\n  {}^",
            " ".repeat(self.column.saturating_sub(1))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Nx,
    Ny,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Sin,
    Cos,
    Exp,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// Values bound to the variables during evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Env {
    pub x: f64,
    pub y: f64,
    pub nx: f64,
    pub ny: f64,
}

/// A parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
}

impl Expr {
    /// Parse an expression in which only `x` and `y` may appear.
    pub fn parse(source: &str) -> Result<Self, ExprError> {
        parse(source, false)
    }

    /// Parse an expression that may also use the normal components `nx`, `ny`.
    pub fn parse_with_normal(source: &str) -> Result<Self, ExprError> {
        parse(source, true)
    }

    pub fn eval(&self, env: &Env) -> f64 {
        eval(&self.root, env)
    }
}

fn eval(node: &Node, env: &Env) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Var(Var::X) => env.x,
        Node::Var(Var::Y) => env.y,
        Node::Var(Var::Nx) => env.nx,
        Node::Var(Var::Ny) => env.ny,
        Node::Neg(a) => -eval(a, env),
        Node::Add(a, b) => eval(a, env) + eval(b, env),
        Node::Sub(a, b) => eval(a, env) - eval(b, env),
        Node::Mul(a, b) => eval(a, env) * eval(b, env),
        Node::Div(a, b) => eval(a, env) / eval(b, env),
        Node::Call(f, args) => {
            let a = eval(&args[0], env);
            match f {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Pow => a.powf(eval(&args[1], env)),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    allow_normal: bool,
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        column,
        message: message.into(),
    })
}

fn tokenize(source: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = source.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent, only when followed by digits
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse::<f64>() {
                Ok(v) => toks.push((Tok::Num(v), column)),
                Err(_) => return err(column, format!("malformed number `{text}`")),
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), column));
        } else if "+-*/(),".contains(c) {
            toks.push((Tok::Op(c), column));
            i += 1;
        } else {
            return err(column, format!("unexpected character `{c}`"));
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(toks)
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, op: char) -> Result<(), ExprError> {
        match self.next() {
            (Tok::Op(c), _) if c == op => Ok(()),
            (tok, column) => err(column, format!("expected `{op}`, found {}", describe(&tok))),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Op('+') => {
                    self.next();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.next();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().0 {
                Tok::Op('*') => {
                    self.next();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.next();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.peek().0 == Tok::Op('-') {
            self.next();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let (tok, column) = self.next();
        match tok {
            Tok::Num(v) => Ok(Node::Num(v)),
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(&name, column),
            other => err(
                column,
                format!("expected a value, found {}", describe(&other)),
            ),
        }
    }

    fn identifier(&mut self, name: &str, column: usize) -> Result<Node, ExprError> {
        let var = match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "nx" => Some(Var::Nx),
            "ny" => Some(Var::Ny),
            _ => None,
        };
        if let Some(v) = var {
            if matches!(v, Var::Nx | Var::Ny) && !self.allow_normal {
                return err(
                    column,
                    format!("`{name}` is only available in Neumann data"),
                );
            }
            return Ok(Node::Var(v));
        }
        let (func, arity) = match name {
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "exp" => (Func::Exp, 1),
            "pow" => (Func::Pow, 2),
            _ => return err(column, format!("unknown name `{name}`")),
        };
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while self.peek().0 == Tok::Op(',') {
            let extra = self.next().1;
            if args.len() == arity {
                return err(extra, format!("`{name}` takes {arity} argument(s)"));
            }
            args.push(self.expr()?);
        }
        if args.len() != arity {
            return err(self.peek().1, format!("`{name}` takes {arity} argument(s)"));
        }
        self.expect(')')?;
        Ok(Node::Call(func, args))
    }
}

fn parse(source: &str, allow_normal: bool) -> Result<Expr, ExprError> {
    let mut p = Parser {
        toks: tokenize(source)?,
        pos: 0,
        allow_normal,
    };
    if p.peek().0 == Tok::End {
        return err(1, "empty expression");
    }
    let root = p.expr()?;
    match p.next() {
        (Tok::End, _) => Ok(Expr { root }),
        (tok, column) => err(column, format!("unexpected {}", describe(&tok))),
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}
