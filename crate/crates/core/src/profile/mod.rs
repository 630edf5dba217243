//! Radial profile expressions: parsing, canonical printing and evaluation
//! with exact first and second derivatives.

mod ast;
mod dual;
mod parser;

pub use ast::{BinOp, Evaluation, Func, Node, ParamSet, ProfileExpr};
pub use dual::Dual2;

/// Parses `text` into a profile expression.
pub fn parse(text: &str) -> crate::Result<ProfileExpr> {
    ProfileExpr::parse(text)
}

/// Evaluates `expr` and its first two `r`-derivatives at `r`.
pub fn eval_d2(expr: &ProfileExpr, r: f64, params: &ParamSet) -> crate::Result<Evaluation> {
    expr.eval_d2(r, params)
}

#[cfg(test)]
mod tests;
