use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::dual::Dual2;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Tanh,
    Pow,
    Min,
    Max,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tanh" => Func::Tanh,
            "pow" => Func::Pow,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tanh => "tanh",
            Func::Pow => "pow",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow | Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

/// Expression tree of a radial profile.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    /// The radial variable `r`.
    Var,
    Pi,
    Param(String),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

/// Named parameter values bound into a profile.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamSet(BTreeMap<String, f64>);

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, value: f64) -> Result<()> {
        if self.0.contains_key(name) {
            return Err(Error::Config(format!("duplicate parameter `{name}`")));
        }
        self.0.insert(name.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.insert(name, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A value with its first two derivatives in `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    /// Some `min`/`max` was evaluated at a tie; derivatives are one-sided.
    pub non_smooth: bool,
}

/// A parsed profile expression.
#[derive(Debug, Clone)]
pub struct ProfileExpr {
    pub(crate) ast: Node,
    /// Byte offset of the first occurrence of each parameter.
    pub(crate) param_offsets: BTreeMap<String, usize>,
}

impl PartialEq for ProfileExpr {
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast
    }
}

impl ProfileExpr {
    pub fn from_ast(ast: Node) -> Self {
        let mut names = BTreeSet::new();
        collect_params(&ast, &mut names);
        Self { ast, param_offsets: names.into_iter().map(|n| (n, 0)).collect() }
    }

    pub fn ast(&self) -> &Node {
        &self.ast
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.param_offsets.keys().map(String::as_str)
    }

    /// Every referenced parameter must be bound in `params`.
    pub fn check_params(&self, params: &ParamSet) -> Result<()> {
        for (name, &offset) in &self.param_offsets {
            if params.get(name).is_none() {
                return Err(Error::UnknownIdentifier { name: name.clone(), offset });
            }
        }
        Ok(())
    }

    /// Substitutes parameter values, yielding an expression of `r` alone.
    pub fn bind(&self, params: &ParamSet) -> Result<ProfileExpr> {
        self.check_params(params)?;
        Ok(ProfileExpr { ast: substitute(&self.ast, params), param_offsets: BTreeMap::new() })
    }

    pub fn eval(&self, r: f64, params: &ParamSet) -> Result<f64> {
        Ok(self.eval_d2(r, params)?.value)
    }

    /// Value, first and second derivative at `r` by forward-mode AD.
    pub fn eval_d2(&self, r: f64, params: &ParamSet) -> Result<Evaluation> {
        let mut non_smooth = false;
        let d = eval_node(&self.ast, Dual2::variable(r), params, &mut non_smooth)?;
        Ok(Evaluation { value: d.v, d1: d.d1, d2: d.d2, non_smooth })
    }
}

fn collect_params(node: &Node, out: &mut BTreeSet<String>) {
    match node {
        Node::Param(name) => {
            out.insert(name.clone());
        }
        Node::Neg(inner) => collect_params(inner, out),
        Node::Binary(_, l, r) => {
            collect_params(l, out);
            collect_params(r, out);
        }
        Node::Call(_, args) => args.iter().for_each(|a| collect_params(a, out)),
        Node::Const(_) | Node::Var | Node::Pi => {}
    }
}

fn substitute(node: &Node, params: &ParamSet) -> Node {
    match node {
        Node::Param(name) => Node::Const(params.get(name).unwrap_or(f64::NAN)),
        Node::Neg(inner) => Node::Neg(Box::new(substitute(inner, params))),
        Node::Binary(op, l, r) => Node::Binary(*op, Box::new(substitute(l, params)), Box::new(substitute(r, params))),
        Node::Call(f, args) => Node::Call(*f, args.iter().map(|a| substitute(a, params)).collect()),
        other => other.clone(),
    }
}

fn pow(base: Dual2, exp: Dual2) -> Result<Dual2> {
    if exp.is_constant() {
        let c = exp.v;
        if base.v < 0.0 && c.fract() != 0.0 {
            return Err(Error::Eval(format!("negative base {} raised to non-integer power {c}", base.v)));
        }
        if base.v == 0.0 && c < 0.0 {
            return Err(Error::Eval("zero raised to a negative power".into()));
        }
        return Ok(base.powf(c));
    }
    if base.v <= 0.0 {
        return Err(Error::Eval(format!("non-positive base {} raised to a variable exponent", base.v)));
    }
    Ok((exp * base.ln()).exp())
}

fn select(a: Dual2, b: Dual2, take_max: bool, non_smooth: &mut bool) -> Dual2 {
    if a.v == b.v {
        *non_smooth = true;
        // Right-sided derivative at the tie.
        let a_wins = if take_max { (a.d1, a.d2) >= (b.d1, b.d2) } else { (a.d1, a.d2) <= (b.d1, b.d2) };
        return if a_wins { a } else { b };
    }
    if (a.v > b.v) == take_max {
        a
    } else {
        b
    }
}

fn eval_node(node: &Node, r: Dual2, params: &ParamSet, non_smooth: &mut bool) -> Result<Dual2> {
    Ok(match node {
        Node::Const(c) => Dual2::constant(*c),
        Node::Var => r,
        Node::Pi => Dual2::constant(std::f64::consts::PI),
        Node::Param(name) => match params.get(name) {
            Some(v) => Dual2::constant(v),
            None => return Err(Error::Eval(format!("unbound parameter `{name}`"))),
        },
        Node::Neg(inner) => -eval_node(inner, r, params, non_smooth)?,
        Node::Binary(op, l, rr) => {
            let a = eval_node(l, r, params, non_smooth)?;
            let b = eval_node(rr, r, params, non_smooth)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.v == 0.0 {
                        return Err(Error::Eval(format!("division by zero at r = {}", r.v)));
                    }
                    a / b
                }
                BinOp::Pow => pow(a, b)?,
            }
        }
        Node::Call(f, args) => {
            let x = eval_node(&args[0], r, params, non_smooth)?;
            match f {
                Func::Sqrt => {
                    if x.v < 0.0 {
                        return Err(Error::Eval(format!("sqrt of negative value {} at r = {}", x.v, r.v)));
                    }
                    x.sqrt()
                }
                Func::Exp => x.exp(),
                Func::Log => {
                    if x.v <= 0.0 {
                        return Err(Error::Eval(format!("log of non-positive value {} at r = {}", x.v, r.v)));
                    }
                    x.ln()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tanh => x.tanh(),
                Func::Pow => pow(x, eval_node(&args[1], r, params, non_smooth)?)?,
                Func::Min => select(x, eval_node(&args[1], r, params, non_smooth)?, false, non_smooth),
                Func::Max => select(x, eval_node(&args[1], r, params, non_smooth)?, true, non_smooth),
            }
        }
    })
}

// Canonical printer. Binding strength: + - (1), * / (2), unary - (3), ^ (4).
fn precedence(node: &Node) -> u8 {
    match node {
        Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Node::Neg(_) => 3,
        Node::Binary(BinOp::Pow, ..) => 4,
        Node::Const(c) if *c < 0.0 || c.is_sign_negative() => 3,
        _ => 5,
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, node: &Node, min_prec: u8) -> fmt::Result {
    let prec = precedence(node);
    let paren = prec < min_prec;
    if paren {
        f.write_str("(")?;
    }
    match node {
        Node::Const(c) => write!(f, "{c}")?,
        Node::Var => f.write_str("r")?,
        Node::Pi => f.write_str("pi")?,
        Node::Param(name) => f.write_str(name)?,
        Node::Neg(inner) => {
            f.write_str("-")?;
            write_node(f, inner, 3)?;
        }
        Node::Binary(op, l, r) => {
            let (sym, lp, rp) = match op {
                BinOp::Add => (" + ", 1, 2),
                BinOp::Sub => (" - ", 1, 2),
                BinOp::Mul => ("*", 2, 3),
                BinOp::Div => ("/", 2, 3),
                BinOp::Pow => ("^", 5, 3),
            };
            write_node(f, l, lp)?;
            f.write_str(sym)?;
            write_node(f, r, rp)?;
        }
        Node::Call(func, args) => {
            write!(f, "{}(", func.name())?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_node(f, a, 0)?;
            }
            f.write_str(")")?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self, 0)
    }
}

impl fmt::Display for ProfileExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}
