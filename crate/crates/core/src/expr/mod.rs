//! Holomorphic expressions: parsing, printing, and exact jet evaluation.
//!
//! An expression is parsed against an explicit list of variable names (at
//! most two, e.g. `["z1", "z2"]` or `["z", "w"]`) and evaluated with
//! [`HoloExpr::eval_jet2`], which returns the value together with exact
//! first and second complex partials. All branch choices are principal
//! (`sqrt(1) = 1`, `log` cut along the negative real axis).
//!
//! The implicit-surface route needs expressions in the three chart
//! variables `z1, z2, z3`; [`parse_surface`] declares exactly those and is
//! the only entry point that exceeds the two-variable limit.

mod jet;
mod parser;

pub use jet::{Jet2, MAX_VARS};

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Errors from parsing or evaluating an expression.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExprError {
    /// Malformed input at a byte offset.
    #[error("syntax error at position {pos}: {msg}")]
    Syntax {
        /// 0-based byte offset into the source text.
        pos: usize,
        /// What was expected or found.
        msg: String,
    },
    /// Identifier that is neither a declared variable, `i`, nor a function.
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier {
        /// The offending name.
        name: String,
        /// 0-based byte offset.
        pos: usize,
    },
    /// More than two variables were declared.
    #[error("more than two variables declared ({got})")]
    TooManyVariables {
        /// Number of names passed.
        got: usize,
    },
    /// A declared variable name is reserved, duplicated, or not an
    /// identifier.
    #[error("bad variable name `{name}`")]
    BadVariableName {
        /// The offending name.
        name: String,
    },
    /// Evaluation hit a singularity (division by zero, `log`/`sqrt` at 0,
    /// or a non-finite intermediate).
    #[error("domain error: {what}")]
    Domain {
        /// Description of the singular operation.
        what: String,
    },
    /// Wrong number of values passed to an evaluation.
    #[error("expression over {expected} variables evaluated with {got} values")]
    ArityMismatch {
        /// Declared variable count.
        expected: usize,
        /// Values supplied.
        got: usize,
    },
}

/// Built-in single-argument holomorphic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuncKind {
    /// Exponential.
    Exp,
    /// Principal logarithm.
    Log,
    /// Principal square root.
    Sqrt,
    /// Sine.
    Sin,
    /// Cosine.
    Cos,
}

impl FuncKind {
    fn from_name(name: &str) -> Option<FuncKind> {
        match name {
            "exp" => Some(FuncKind::Exp),
            "log" => Some(FuncKind::Log),
            "sqrt" => Some(FuncKind::Sqrt),
            "sin" => Some(FuncKind::Sin),
            "cos" => Some(FuncKind::Cos),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            FuncKind::Exp => "exp",
            FuncKind::Log => "log",
            FuncKind::Sqrt => "sqrt",
            FuncKind::Sin => "sin",
            FuncKind::Cos => "cos",
        }
    }
}

/// Syntax tree of a holomorphic expression.
///
/// Parsed constants are real literals or the imaginary unit; general
/// complex constants appear as arithmetic combinations of the two.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// Real literal.
    Num(f64),
    /// The imaginary unit `i`.
    ImUnit,
    /// Declared variable, by index into the expression's variable list.
    Var(usize),
    /// Sum.
    Add(Box<Node>, Box<Node>),
    /// Difference.
    Sub(Box<Node>, Box<Node>),
    /// Product.
    Mul(Box<Node>, Box<Node>),
    /// Quotient.
    Div(Box<Node>, Box<Node>),
    /// Negation.
    Neg(Box<Node>),
    /// Integer power.
    Pow(Box<Node>, i32),
    /// Function application.
    Func(FuncKind, Box<Node>),
}

/// A parsed holomorphic expression over named complex variables.
///
/// Immutable after construction; shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloExpr {
    vars: Vec<String>,
    root: Node,
}

/// Parses `text` over at most two named variables.
pub fn parse(text: &str, vars: &[&str]) -> Result<HoloExpr, ExprError> {
    if vars.len() > 2 {
        return Err(ExprError::TooManyVariables { got: vars.len() });
    }
    parse_with_vars(text, vars)
}

/// Parses `text` over the implicit-surface chart variables `z1, z2, z3`.
///
/// This is the entry point for level-set surfaces `f(z1, z2, z3) = 0`; it
/// is the one place three variables are allowed.
pub fn parse_surface(text: &str) -> Result<HoloExpr, ExprError> {
    parse_with_vars(text, &["z1", "z2", "z3"])
}

fn parse_with_vars(text: &str, vars: &[&str]) -> Result<HoloExpr, ExprError> {
    debug_assert!(vars.len() <= MAX_VARS);
    let reserved = ["i", "exp", "log", "sqrt", "sin", "cos"];
    for (k, name) in vars.iter().enumerate() {
        let mut chars = name.chars();
        let head_ok = chars
            .next()
            .map(|c| c.is_ascii_alphabetic() || c == '_')
            .unwrap_or(false);
        let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !head_ok || !tail_ok || reserved.contains(name) || vars[..k].contains(name) {
            return Err(ExprError::BadVariableName {
                name: name.to_string(),
            });
        }
    }
    let owned: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let mut parser = parser::Parser::new(text, &owned)?;
    let root = parser.parse_full()?;
    Ok(HoloExpr { vars: owned, root })
}

impl HoloExpr {
    /// Declared variable names, in declaration order.
    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    /// Number of declared variables.
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Evaluates value plus exact first and second partials at `point`.
    pub fn eval_jet2(&self, point: &[C64]) -> Result<Jet2, ExprError> {
        if point.len() != self.vars.len() {
            return Err(ExprError::ArityMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let jet = eval_node(&self.root, point)?;
        if !jet.is_finite() {
            return Err(ExprError::Domain {
                what: "non-finite value or derivative".to_string(),
            });
        }
        Ok(jet)
    }

    /// Evaluates the value only.
    pub fn eval(&self, point: &[C64]) -> Result<C64, ExprError> {
        Ok(self.eval_jet2(point)?.value())
    }

    /// Renders the expression as parseable text; reparsing yields the same
    /// tree.
    pub fn to_text(&self) -> String {
        print_node(&self.root, &self.vars)
    }
}

impl std::fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn eval_node(node: &Node, point: &[C64]) -> Result<Jet2, ExprError> {
    let n = point.len();
    let jet = match node {
        Node::Num(x) => Jet2::constant(n, C64::new(*x, 0.0)),
        Node::ImUnit => Jet2::constant(n, C64::new(0.0, 1.0)),
        Node::Var(idx) => Jet2::variable(n, *idx, point[*idx]),
        Node::Add(a, b) => eval_node(a, point)?.add(&eval_node(b, point)?),
        Node::Sub(a, b) => eval_node(a, point)?.sub(&eval_node(b, point)?),
        Node::Mul(a, b) => eval_node(a, point)?.mul(&eval_node(b, point)?),
        Node::Div(a, b) => eval_node(a, point)?
            .div(&eval_node(b, point)?)
            .ok_or_else(|| ExprError::Domain {
                what: "division by zero".to_string(),
            })?,
        Node::Neg(a) => eval_node(a, point)?.neg(),
        Node::Pow(a, k) => eval_node(a, point)?
            .powi(*k)
            .ok_or_else(|| ExprError::Domain {
                what: format!("zero raised to power {k} (or its derivative) is singular"),
            })?,
        Node::Func(kind, a) => {
            let arg = eval_node(a, point)?;
            match kind {
                FuncKind::Exp => arg.exp(),
                FuncKind::Log => arg.log().ok_or_else(|| ExprError::Domain {
                    what: "log at zero".to_string(),
                })?,
                FuncKind::Sqrt => arg.sqrt().ok_or_else(|| ExprError::Domain {
                    what: "sqrt at zero".to_string(),
                })?,
                FuncKind::Sin => arg.sin(),
                FuncKind::Cos => arg.cos(),
            }
        }
    };
    Ok(jet)
}

/// Operator precedence used by the printer: additive < multiplicative <
/// unary minus < power < atom.
fn precedence(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(..) => 3,
        Node::Pow(..) => 4,
        Node::Num(_) | Node::ImUnit | Node::Var(_) | Node::Func(..) => 5,
    }
}

fn print_node(node: &Node, vars: &[String]) -> String {
    let child = |n: &Node, min: u8| {
        let text = print_node(n, vars);
        if precedence(n) < min {
            format!("({text})")
        } else {
            text
        }
    };
    match node {
        Node::Num(x) => print_number(*x),
        Node::ImUnit => "i".to_string(),
        Node::Var(idx) => vars[*idx].clone(),
        Node::Add(a, b) => format!("{} + {}", child(a, 1), child(b, 2)),
        Node::Sub(a, b) => format!("{} - {}", child(a, 1), child(b, 2)),
        Node::Mul(a, b) => format!("{}*{}", child(a, 2), child(b, 3)),
        Node::Div(a, b) => format!("{}/{}", child(a, 2), child(b, 3)),
        Node::Neg(a) => format!("-{}", child(a, 3)),
        Node::Pow(a, k) => {
            // Power bases must reparse as atoms.
            let base = print_node(a, vars);
            let needs_parens = !node_base_is_atom(a);
            if needs_parens {
                format!("({base})^{k}")
            } else {
                format!("{base}^{k}")
            }
        }
        Node::Func(kind, a) => format!("{}({})", kind.name(), print_node(a, vars)),
    }
}

fn node_base_is_atom(node: &Node) -> bool {
    matches!(
        node,
        Node::Var(_) | Node::ImUnit | Node::Func(..) | Node::Num(_)
    ) && !matches!(node, Node::Num(x) if *x < 0.0)
}

fn print_number(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}
