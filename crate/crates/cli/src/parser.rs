//! Recursive-descent parser for scripts.
//!
//! ```text
//! stmt    := ringdef | "use" NAME ";" | iddef | moddef | cldef | show | check | modify | export
//! ringdef := "ring" NAME "=" "poly" "(" field "," varlist "," order ")" ["/" "(" polylist ")"] ";"
//!          | "ring" NAME "=" "subring" "(" field "," varlist "," varlist "," "[" polylist "]" ")" ";"
//! field   := "Q" | "Fp" "(" INT ")"
//! order   := "lex" | "degrevlex" | "wdegrevlex" "[" intlist "]"
//! iddef   := "ideal" NAME "=" "(" polylist ")" ";"
//! moddef  := ("module" | "submodule" | "map") NAME "=" expr ";"
//! cldef   := "closure" NAME "=" expr ";"
//! show    := "show" expr ";"
//! check   := "check" FN "(" [expr ("," expr)*] ")" ";"
//! modify  := "modify" NAME "=" expr ";"
//! export  := "export" ("json" | "session") STRING ";"
//! expr    := NAME "(" [expr ("," expr)*] ")" | "[" [expr ("," expr)*] "]" | STRING | poly
//! ```
//!
//! An identifier directly followed by `(` is always a call, so write `x*(y+1)`
//! rather than `x(y+1)` inside arguments.

use closure_core::polyarith::parse::{tokenize, TokenCursor, TokenKind};
use closure_core::polyarith::PolyExpr;
use closure_core::ParseError;
use num_traits::ToPrimitive;

use crate::ast::{ExportFormat, Expr, FieldSpec, OrderSpec, RingDef, Statement, Stmt, CHECK_FUNCTIONS};

type PResult<T> = std::result::Result<T, ParseError>;

const STATEMENT_KEYWORDS: &[&str] = &[
    "ring", "use", "ideal", "module", "submodule", "map", "closure", "show", "check", "modify", "export",
];

/// Parses a whole script.
pub fn parse(src: &str) -> PResult<Vec<Statement>> {
    let tokens = tokenize(src)?;
    let mut cur = TokenCursor::new(&tokens);
    let mut out = Vec::new();
    while !cur.at(&TokenKind::Eof) {
        let line = cur.peek().line;
        let stmt = statement(&mut cur)?;
        out.push(Statement { stmt, line });
    }
    Ok(out)
}

fn keyword(cur: &mut TokenCursor, word: &str) -> PResult<()> {
    match &cur.peek().kind {
        TokenKind::Ident(s) if s == word => {
            cur.advance();
            Ok(())
        }
        other => {
            let found = other.describe();
            Err(cur.error_here(format!("unexpected {found}"), &[&format!("`{word}`")]))
        }
    }
}

fn at_word(cur: &TokenCursor, word: &str) -> bool {
    matches!(&cur.peek().kind, TokenKind::Ident(s) if s == word)
}

fn semi(cur: &mut TokenCursor) -> PResult<()> {
    cur.expect(&TokenKind::Semi).map(|_| ())
}

fn statement(cur: &mut TokenCursor) -> PResult<Stmt> {
    let word = match &cur.peek().kind {
        TokenKind::Ident(s) if STATEMENT_KEYWORDS.contains(&s.as_str()) => s.clone(),
        other => {
            let found = other.describe();
            let expected: Vec<String> = STATEMENT_KEYWORDS.iter().map(|k| format!("`{k}`")).collect();
            let expected: Vec<&str> = expected.iter().map(|s| s.as_str()).collect();
            return Err(cur.error_here(format!("unexpected {found}"), &expected));
        }
    };
    cur.advance();
    let stmt = match word.as_str() {
        "ring" => {
            let name = cur.expect_ident()?;
            cur.expect(&TokenKind::Eq)?;
            Stmt::Ring { name, def: ring_def(cur)? }
        }
        "use" => Stmt::Use { ring: cur.expect_ident()? },
        "ideal" => {
            let name = cur.expect_ident()?;
            cur.expect(&TokenKind::Eq)?;
            cur.expect(&TokenKind::LParen)?;
            let gens = poly_list(cur, &TokenKind::RParen)?;
            Stmt::Ideal { name, gens }
        }
        "show" => Stmt::Show { expr: expr(cur)? },
        "check" => {
            let func = match &cur.peek().kind {
                TokenKind::Ident(s) if CHECK_FUNCTIONS.contains(&s.as_str()) => s.clone(),
                other => {
                    let found = other.describe();
                    return Err(cur.error_here(format!("unknown check {found}"), CHECK_FUNCTIONS));
                }
            };
            cur.advance();
            cur.expect(&TokenKind::LParen)?;
            let args = expr_list(cur, &TokenKind::RParen)?;
            Stmt::Check { func, args }
        }
        "export" => {
            let format = if at_word(cur, "json") {
                ExportFormat::Json
            } else if at_word(cur, "session") {
                ExportFormat::Session
            } else {
                let found = cur.peek().kind.describe();
                return Err(cur.error_here(format!("unexpected {found}"), &["`json`", "`session`"]));
            };
            cur.advance();
            let path = match &cur.peek().kind {
                TokenKind::Str(s) => s.clone(),
                other => {
                    let found = other.describe();
                    return Err(cur.error_here(format!("unexpected {found}"), &["string"]));
                }
            };
            cur.advance();
            Stmt::Export { format, path }
        }
        _ => {
            let name = cur.expect_ident()?;
            cur.expect(&TokenKind::Eq)?;
            let expr = expr(cur)?;
            match word.as_str() {
                "module" => Stmt::Module { name, expr },
                "submodule" => Stmt::Submodule { name, expr },
                "map" => Stmt::Map { name, expr },
                "closure" => Stmt::Closure { name, expr },
                _ => Stmt::Modify { name, expr },
            }
        }
    };
    semi(cur)?;
    Ok(stmt)
}

fn field(cur: &mut TokenCursor) -> PResult<FieldSpec> {
    if at_word(cur, "Q") {
        cur.advance();
        return Ok(FieldSpec::Rationals);
    }
    if at_word(cur, "Fp") {
        cur.advance();
        cur.expect(&TokenKind::LParen)?;
        let n = cur.expect_int()?;
        let p = n.to_u64().ok_or_else(|| cur.error_here("characteristic too large", &["integer"]))?;
        cur.expect(&TokenKind::RParen)?;
        return Ok(FieldSpec::Prime(p));
    }
    let found = cur.peek().kind.describe();
    Err(cur.error_here(format!("unexpected {found}"), &["`Q`", "`Fp`"]))
}

fn order(cur: &mut TokenCursor) -> PResult<OrderSpec> {
    let found = cur.peek().kind.describe();
    let err = |cur: &TokenCursor| cur.error_here(format!("unexpected {found}"), &["`lex`", "`degrevlex`", "`wdegrevlex`"]);
    let word = match &cur.peek().kind {
        TokenKind::Ident(s) => s.clone(),
        _ => return Err(err(cur)),
    };
    match word.as_str() {
        "lex" => {
            cur.advance();
            Ok(OrderSpec::Lex)
        }
        "degrevlex" => {
            cur.advance();
            Ok(OrderSpec::DegRevLex)
        }
        "wdegrevlex" => {
            cur.advance();
            cur.expect(&TokenKind::LBracket)?;
            let mut w = Vec::new();
            loop {
                let n = cur.expect_int()?;
                w.push(n.to_i64().ok_or_else(|| cur.error_here("weight too large", &["integer"]))?);
                if !cur.eat(&TokenKind::Comma) {
                    break;
                }
            }
            cur.expect(&TokenKind::RBracket)?;
            Ok(OrderSpec::WeightedDegRevLex(w))
        }
        _ => Err(err(cur)),
    }
}

fn ident_list(cur: &mut TokenCursor) -> PResult<Vec<String>> {
    cur.expect(&TokenKind::LBracket)?;
    let mut out = Vec::new();
    if cur.eat(&TokenKind::RBracket) {
        return Ok(out);
    }
    loop {
        out.push(cur.expect_ident()?);
        if !cur.eat(&TokenKind::Comma) {
            break;
        }
    }
    cur.expect(&TokenKind::RBracket)?;
    Ok(out)
}

/// Comma-separated polynomials up to and including `close`.
fn poly_list(cur: &mut TokenCursor, close: &TokenKind) -> PResult<Vec<PolyExpr>> {
    let mut out = Vec::new();
    if cur.eat(close) {
        return Ok(out);
    }
    loop {
        out.push(cur.parse_expr()?);
        if !cur.eat(&TokenKind::Comma) {
            break;
        }
    }
    cur.expect(close)?;
    Ok(out)
}

fn ring_def(cur: &mut TokenCursor) -> PResult<RingDef> {
    if at_word(cur, "subring") {
        cur.advance();
        cur.expect(&TokenKind::LParen)?;
        let field = field(cur)?;
        cur.expect(&TokenKind::Comma)?;
        let ambient = ident_list(cur)?;
        cur.expect(&TokenKind::Comma)?;
        let names = ident_list(cur)?;
        cur.expect(&TokenKind::Comma)?;
        cur.expect(&TokenKind::LBracket)?;
        let images = poly_list(cur, &TokenKind::RBracket)?;
        cur.expect(&TokenKind::RParen)?;
        return Ok(RingDef::Subring {
            field,
            ambient,
            names,
            images,
        });
    }
    keyword(cur, "poly").map_err(|e| e.expecting(&["`poly`", "`subring`"]))?;
    cur.expect(&TokenKind::LParen)?;
    let field = field(cur)?;
    cur.expect(&TokenKind::Comma)?;
    let vars = ident_list(cur)?;
    cur.expect(&TokenKind::Comma)?;
    let order = order(cur)?;
    cur.expect(&TokenKind::RParen)?;
    let relations = if cur.eat(&TokenKind::Slash) {
        cur.expect(&TokenKind::LParen)?;
        poly_list(cur, &TokenKind::RParen)?
    } else {
        Vec::new()
    };
    Ok(RingDef::Poly {
        field,
        vars,
        order,
        relations,
    })
}

fn expr_list(cur: &mut TokenCursor, close: &TokenKind) -> PResult<Vec<Expr>> {
    let mut out = Vec::new();
    if cur.eat(close) {
        return Ok(out);
    }
    loop {
        out.push(expr(cur)?);
        if !cur.eat(&TokenKind::Comma) {
            break;
        }
    }
    cur.expect(close)?;
    Ok(out)
}

fn expr(cur: &mut TokenCursor) -> PResult<Expr> {
    match &cur.peek().kind {
        TokenKind::Ident(name) if cur.peek_at(1).kind == TokenKind::LParen => {
            let name = name.clone();
            cur.advance();
            cur.advance();
            Ok(Expr::Call(name, expr_list(cur, &TokenKind::RParen)?))
        }
        TokenKind::LBracket => {
            cur.advance();
            Ok(Expr::List(expr_list(cur, &TokenKind::RBracket)?))
        }
        TokenKind::Str(s) => {
            let s = s.clone();
            cur.advance();
            Ok(Expr::Str(s))
        }
        _ => Ok(Expr::Poly(cur.parse_expr()?)),
    }
}
