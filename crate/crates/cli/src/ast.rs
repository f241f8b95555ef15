//! Script syntax trees and their canonical printed form.
//!
//! Printing is the inverse of parsing on trees: `parse(print(s)) == s`.

use std::fmt;

use closure_core::polyarith::PolyExpr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSpec {
    Lex,
    DegRevLex,
    WeightedDegRevLex(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDef {
    /// `poly(field, [vars], order) / (relations)`
    Poly {
        field: FieldSpec,
        vars: Vec<String>,
        order: OrderSpec,
        relations: Vec<PolyExpr>,
    },
    /// `subring(field, [ambient vars], [names], [monomials])`
    Subring {
        field: FieldSpec,
        ambient: Vec<String>,
        names: Vec<String>,
        images: Vec<PolyExpr>,
    },
}

/// Argument expressions. Bare identifiers parse as [`PolyExpr::Var`] and are
/// looked up in the session before being read as ring variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Poly(PolyExpr),
    List(Vec<Expr>),
    Call(String, Vec<Expr>),
    Str(String),
}

impl Expr {
    pub fn name(&self) -> Option<&str> {
        match self {
            Expr::Poly(PolyExpr::Var(s)) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Session,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Ring { name: String, def: RingDef },
    Use { ring: String },
    Ideal { name: String, gens: Vec<PolyExpr> },
    Module { name: String, expr: Expr },
    Submodule { name: String, expr: Expr },
    Map { name: String, expr: Expr },
    Closure { name: String, expr: Expr },
    Show { expr: Expr },
    Check { func: String, args: Vec<Expr> },
    Modify { name: String, expr: Expr },
    Export { format: ExportFormat, path: String },
}

pub const CHECK_FUNCTIONS: &[&str] = &[
    "member",
    "equal",
    "functorial",
    "semi_residual",
    "faithful",
    "colon_capturing",
    "gcc",
    "phantom",
    "dietz_obstruction",
    "regular_sequence",
    "trivial_on",
];

impl Stmt {
    /// Statement kind as reported in JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            Stmt::Ring { .. } | Stmt::Use { .. } => "ring-def",
            Stmt::Ideal { .. } => "ideal-def",
            Stmt::Module { .. } | Stmt::Submodule { .. } | Stmt::Map { .. } => "module-def",
            Stmt::Closure { .. } => "closure-def",
            Stmt::Show { .. } => "query",
            Stmt::Check { .. } => "check",
            Stmt::Modify { .. } => "modify",
            Stmt::Export { .. } => "export",
        }
    }
}

/// A statement with the line it starts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub stmt: Stmt,
    pub line: usize,
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "Fp({p})"),
        }
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Lex => write!(f, "lex"),
            OrderSpec::DegRevLex => write!(f, "degrevlex"),
            OrderSpec::WeightedDegRevLex(w) => write!(f, "wdegrevlex[{}]", join(w)),
        }
    }
}

impl fmt::Display for RingDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDef::Poly {
                field,
                vars,
                order,
                relations,
            } => {
                write!(f, "poly({field}, [{}], {order})", vars.join(", "))?;
                if !relations.is_empty() {
                    write!(f, " / ({})", join(relations))?;
                }
                Ok(())
            }
            RingDef::Subring {
                field,
                ambient,
                names,
                images,
            } => write!(
                f,
                "subring({field}, [{}], [{}], [{}])",
                ambient.join(", "),
                names.join(", "),
                join(images)
            ),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Poly(p) => write!(f, "{p}"),
            Expr::List(items) => write!(f, "[{}]", join(items)),
            Expr::Call(name, args) => write!(f, "{name}({})", join(args)),
            Expr::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Ring { name, def } => write!(f, "ring {name} = {def};"),
            Stmt::Use { ring } => write!(f, "use {ring};"),
            Stmt::Ideal { name, gens } => write!(f, "ideal {name} = ({});", join(gens)),
            Stmt::Module { name, expr } => write!(f, "module {name} = {expr};"),
            Stmt::Submodule { name, expr } => write!(f, "submodule {name} = {expr};"),
            Stmt::Map { name, expr } => write!(f, "map {name} = {expr};"),
            Stmt::Closure { name, expr } => write!(f, "closure {name} = {expr};"),
            Stmt::Show { expr } => write!(f, "show {expr};"),
            Stmt::Check { func, args } => write!(f, "check {func}({});", join(args)),
            Stmt::Modify { name, expr } => write!(f, "modify {name} = {expr};"),
            Stmt::Export { format, path } => {
                let kind = match format {
                    ExportFormat::Json => "json",
                    ExportFormat::Session => "session",
                };
                write!(f, "export {kind} \"{path}\";")
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.stmt)
    }
}

/// Canonical text of a whole script, one statement per line.
pub fn print_script(stmts: &[Statement]) -> String {
    stmts.iter().map(|s| format!("{s}\n")).collect()
}
