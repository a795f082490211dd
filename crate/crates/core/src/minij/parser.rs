use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::error::{FrontendError, ParseError};
use super::lexer::{tokenize, Token, TokenKind};

/// Parses a token stream into a [`Program`].
pub fn parse(tokens: &[Token]) -> Result<Program, ParseError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        loops: 0,
        switches: 0,
    };
    let mut methods = Vec::new();
    while !p.at_end() {
        methods.push(p.method()?);
    }
    for m in &methods {
        check_declared_before_use(m)?;
    }
    Ok(Program { methods })
}

/// Convenience wrapper: tokenize then parse.
pub fn parse_source(source: &str) -> Result<Program, FrontendError> {
    let tokens = tokenize(source)?;
    Ok(parse(&tokens)?)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    loops: usize,
    switches: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'t> Parser<'t> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + n)
    }

    fn check(&self, text: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.text == text && t.kind != TokenKind::Literal)
    }

    fn check_at(&self, n: usize, text: &str) -> bool {
        self.peek_at(n)
            .is_some_and(|t| t.text == text && t.kind != TokenKind::Literal)
    }

    fn line(&self) -> u32 {
        self.peek()
            .or_else(|| self.tokens.last())
            .map_or(1, |t| t.line)
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                line: t.line,
                col: t.col,
                expected: expected.into(),
                found: format!("`{}`", t.text),
            },
            None => {
                let (line, col) = self
                    .tokens
                    .last()
                    .map_or((1, 1), |t| (t.line, t.col + t.text.chars().count() as u32));
                ParseError {
                    line,
                    col,
                    expected: expected.into(),
                    found: "end of input".into(),
                }
            }
        }
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.check(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> PResult<&'t Token> {
        if self.check(text) {
            Ok(self.bump())
        } else {
            Err(self.error(format!("`{text}`")))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok(t.text.clone())
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn is_ident_at(&self, n: usize) -> bool {
        self.peek_at(n)
            .is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    /// Length in tokens of a type name (`T`, `a.b.T`, `T[]`) starting at `n`
    /// that is immediately followed by an identifier, i.e. a declaration.
    fn decl_type_len(&self, n: usize) -> Option<usize> {
        if !self.is_ident_at(n) {
            return None;
        }
        let mut k = n + 1;
        while self.check_at(k, ".") && self.is_ident_at(k + 1) {
            k += 2;
        }
        while self.check_at(k, "[") && self.check_at(k + 1, "]") {
            k += 2;
        }
        self.is_ident_at(k).then_some(k - n)
    }

    fn type_name(&mut self, len: usize) -> String {
        let mut s = String::new();
        for _ in 0..len {
            s.push_str(&self.bump().text);
        }
        s
    }

    fn method(&mut self) -> PResult<MethodDecl> {
        let line = self.line();
        let ret_type = self.decl_type_len(0).map(|len| self.type_name(len));
        let name = self.ident()?;
        self.expect("(")?;
        let mut params = Vec::new();
        if !self.check(")") {
            loop {
                self.eat("final");
                let ty = self.decl_type_len(0).map(|len| self.type_name(len));
                params.push(Param {
                    ty,
                    name: self.ident()?,
                });
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = self.block()?;
        Ok(MethodDecl {
            ret_type,
            name,
            params,
            body,
            line,
        })
    }

    fn block(&mut self) -> PResult<Block> {
        let line = self.expect("{")?.line;
        let mut stmts = Vec::new();
        while !self.check("}") {
            if self.at_end() {
                return Err(self.error("`}`"));
            }
            if let Some(s) = self.stmt()? {
                stmts.push(s);
            }
        }
        self.bump();
        Ok(Block { stmts, line })
    }

    /// Body of a compound statement: a braced block, or a single statement
    /// wrapped into a block.
    fn body(&mut self) -> PResult<Block> {
        if self.check("{") {
            return self.block();
        }
        let line = self.line();
        let stmts = self.stmt()?.into_iter().collect();
        Ok(Block { stmts, line })
    }

    fn stmt(&mut self) -> PResult<Option<Stmt>> {
        let line = self.line();
        let Some(tok) = self.peek() else {
            return Err(self.error("statement"));
        };
        let kind = match (tok.kind, tok.text.as_str()) {
            (TokenKind::Punctuation, ";") => {
                self.bump();
                return Ok(None);
            }
            (TokenKind::Punctuation, "{") => StmtKind::Block(self.block()?),
            (TokenKind::Keyword, "if") => {
                self.bump();
                let cond = self.paren_expr()?;
                let then_block = self.body()?;
                let else_block = if self.eat("else") {
                    Some(self.body()?)
                } else {
                    None
                };
                StmtKind::If {
                    cond,
                    then_block,
                    else_block,
                }
            }
            (TokenKind::Keyword, "while") => {
                self.bump();
                let cond = self.paren_expr()?;
                self.loops += 1;
                let body = self.body();
                self.loops -= 1;
                StmtKind::While { cond, body: body? }
            }
            (TokenKind::Keyword, "for") => self.for_stmt()?,
            (TokenKind::Keyword, "switch") => self.switch_stmt()?,
            (TokenKind::Keyword, "break") => {
                if self.loops == 0 && self.switches == 0 {
                    return Err(self.error("`break` inside a loop or switch"));
                }
                self.bump();
                self.expect(";")?;
                StmtKind::Break
            }
            (TokenKind::Keyword, "continue") => {
                if self.loops == 0 {
                    return Err(self.error("`continue` inside a loop"));
                }
                self.bump();
                self.expect(";")?;
                StmtKind::Continue
            }
            (TokenKind::Keyword, "return") => {
                self.bump();
                let value = if self.check(";") {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(";")?;
                StmtKind::Return(value)
            }
            (TokenKind::Keyword, "throw") => {
                self.bump();
                let value = self.expr()?;
                self.expect(";")?;
                StmtKind::Throw(value)
            }
            _ => {
                let kind = self.simple_stmt()?;
                self.expect(";")?;
                kind
            }
        };
        Ok(Some(Stmt { kind, line }))
    }

    /// Declarations, assignments, increments and call statements; the forms
    /// allowed in `for` headers.
    fn simple_stmt(&mut self) -> PResult<StmtKind> {
        self.eat("final");
        if self.eat("var") {
            return self.var_decl(None);
        }
        if let Some(len) = self.decl_type_len(0) {
            let ty = self.type_name(len);
            return self.var_decl(Some(ty));
        }
        if self.check("++") || self.check("--") {
            let op = if self.bump().text == "++" {
                AssignOp::Increment
            } else {
                AssignOp::Decrement
            };
            let target = self.lvalue_expr()?;
            return Ok(StmtKind::Assign {
                target,
                op,
                value: None,
            });
        }

        let start = self.pos;
        let e = self.postfix()?;
        if let ExprKind::Call(call) = e.kind {
            return Ok(StmtKind::Call(call));
        }
        let target = to_lvalue(&e).ok_or_else(|| {
            let t = &self.tokens[start];
            ParseError {
                line: t.line,
                col: t.col,
                expected: "assignment target or call".into(),
                found: format!("`{}`", t.text),
            }
        })?;

        let Some(op_tok) = self.peek() else {
            return Err(self.error("assignment operator"));
        };
        let op = match op_tok.text.as_str() {
            "=" => AssignOp::Set,
            "++" => AssignOp::Increment,
            "--" => AssignOp::Decrement,
            t if t.len() >= 2 && t.ends_with('=') && op_tok.kind == TokenKind::Operator => {
                match BinaryOp::from_symbol(&t[..t.len() - 1]) {
                    Some(bin) if !matches!(t, "==" | "!=" | "<=" | ">=") => AssignOp::Compound(bin),
                    _ => return Err(self.error("assignment operator")),
                }
            }
            _ => return Err(self.error("assignment operator")),
        };
        self.bump();
        let value = match op {
            AssignOp::Increment | AssignOp::Decrement => None,
            _ => Some(self.expr()?),
        };
        Ok(StmtKind::Assign { target, op, value })
    }

    fn var_decl(&mut self, ty: Option<String>) -> PResult<StmtKind> {
        let name = self.ident()?;
        let init = if self.eat("=") {
            Some(self.expr()?)
        } else {
            None
        };
        if ty.is_none() && init.is_none() {
            return Err(self.error("`=` after `var` declaration"));
        }
        Ok(StmtKind::VarDecl { ty, name, init })
    }

    fn lvalue_expr(&mut self) -> PResult<LValue> {
        let start = self.pos;
        let e = self.postfix()?;
        to_lvalue(&e).ok_or_else(|| {
            let t = &self.tokens[start];
            ParseError {
                line: t.line,
                col: t.col,
                expected: "assignment target".into(),
                found: format!("`{}`", t.text),
            }
        })
    }

    fn for_stmt(&mut self) -> PResult<StmtKind> {
        self.bump();
        self.expect("(")?;
        let init = self.stmt_list(";")?;
        self.expect(";")?;
        let cond = if self.check(";") {
            None
        } else {
            Some(self.expr()?)
        };
        self.expect(";")?;
        let update = self.stmt_list(")")?;
        self.expect(")")?;
        self.loops += 1;
        let body = self.body();
        self.loops -= 1;
        Ok(StmtKind::For {
            init,
            cond,
            update,
            body: body?,
        })
    }

    fn stmt_list(&mut self, end: &str) -> PResult<Vec<Stmt>> {
        let mut out = Vec::new();
        if self.check(end) {
            return Ok(out);
        }
        loop {
            let line = self.line();
            out.push(Stmt {
                kind: self.simple_stmt()?,
                line,
            });
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn switch_stmt(&mut self) -> PResult<StmtKind> {
        self.bump();
        let scrutinee = self.paren_expr()?;
        self.expect("{")?;
        self.switches += 1;
        let mut cases = Vec::new();
        let result = loop {
            if self.eat("}") {
                break Ok(());
            }
            let line = self.line();
            let label = if self.eat("default") {
                CaseLabel::Default
            } else if self.eat("case") {
                CaseLabel::Value(self.ternary()?)
            } else {
                break Err(self.error("`case`, `default` or `}`"));
            };
            if let Err(e) = self.expect(":") {
                break Err(e);
            }
            let body_line = self.line();
            let mut stmts = Vec::new();
            while !(self.check("case") || self.check("default") || self.check("}") || self.at_end())
            {
                match self.stmt() {
                    Ok(Some(s)) => stmts.push(s),
                    Ok(None) => {}
                    Err(e) => {
                        self.switches -= 1;
                        return Err(e);
                    }
                }
            }
            cases.push(SwitchCase {
                label,
                body: Block {
                    stmts,
                    line: body_line,
                },
                line,
            });
        };
        self.switches -= 1;
        result?;
        if cases
            .iter()
            .filter(|c| c.label == CaseLabel::Default)
            .count()
            > 1
        {
            return Err(self.error("at most one `default` label"));
        }
        Ok(StmtKind::Switch { scrutinee, cases })
    }

    fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(e)
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.ternary()
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(2)?;
        if !self.check("?") {
            return Ok(cond);
        }
        self.bump();
        let then_expr = self.ternary()?;
        self.expect(":")?;
        let else_expr = self.ternary()?;
        let line = cond.line;
        Ok(Expr {
            kind: ExprKind::Ternary {
                cond: Box::new(cond),
                then_expr: Box::new(then_expr),
                else_expr: Box::new(else_expr),
            },
            line,
        })
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let Some(op) = self
                .peek()
                .filter(|t| t.kind == TokenKind::Operator)
                .and_then(|t| BinaryOp::from_symbol(&t.text))
                .filter(|op| op.precedence() >= min_prec)
            else {
                return Ok(lhs);
            };
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            let line = lhs.line;
            lhs = Expr {
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                line,
            };
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        let line = self.line();
        let op = match self.peek().map(|t| (t.kind, t.text.as_str())) {
            Some((TokenKind::Operator, "!")) => UnaryOp::Not,
            Some((TokenKind::Operator, "-")) => UnaryOp::Neg,
            Some((TokenKind::Operator, "+")) => UnaryOp::Plus,
            Some((TokenKind::Operator, "~")) => UnaryOp::BitNot,
            _ => return self.postfix(),
        };
        self.bump();
        let operand = self.unary()?;
        Ok(Expr {
            kind: ExprKind::Unary {
                op,
                operand: Box::new(operand),
            },
            line,
        })
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            if self.check(".") {
                self.bump();
                let name = self.ident()?;
                let line = e.line;
                if self.check("(") {
                    let args = self.args()?;
                    e = Expr {
                        kind: ExprKind::Call(CallExpr {
                            receiver: Some(Box::new(e)),
                            name,
                            args,
                            line,
                        }),
                        line,
                    };
                } else {
                    e = Expr {
                        kind: ExprKind::Field {
                            base: Box::new(e),
                            name,
                        },
                        line,
                    };
                }
            } else if self.check("[") {
                self.bump();
                let index = self.expr()?;
                self.expect("]")?;
                let line = e.line;
                e = Expr {
                    kind: ExprKind::Index {
                        base: Box::new(e),
                        index: Box::new(index),
                    },
                    line,
                };
            } else {
                return Ok(e);
            }
        }
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.check(")") {
            loop {
                args.push(self.expr()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let line = self.line();
        let Some(tok) = self.peek() else {
            return Err(self.error("expression"));
        };
        let kind = match (tok.kind, tok.text.as_str()) {
            (TokenKind::Literal, _) => {
                self.bump();
                ExprKind::Literal(tok.text.clone())
            }
            (TokenKind::Identifier, _) => {
                self.bump();
                if self.check("(") {
                    let args = self.args()?;
                    ExprKind::Call(CallExpr {
                        receiver: None,
                        name: tok.text.clone(),
                        args,
                        line,
                    })
                } else {
                    ExprKind::Name(tok.text.clone())
                }
            }
            (TokenKind::Keyword, kw @ ("this" | "super")) => {
                self.bump();
                if self.check("(") {
                    let args = self.args()?;
                    ExprKind::Call(CallExpr {
                        receiver: None,
                        name: kw.to_string(),
                        args,
                        line,
                    })
                } else if kw == "this" {
                    ExprKind::This
                } else {
                    return Err(self.error("`(` after `super`"));
                }
            }
            (TokenKind::Keyword, "new") => {
                self.bump();
                let mut class = self.ident()?;
                while self.check(".") && self.is_ident_at(1) {
                    self.bump();
                    class.push('.');
                    class.push_str(&self.bump().text);
                }
                let args = self.args()?;
                ExprKind::New { class, args }
            }
            (TokenKind::Punctuation, "(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                return Ok(e);
            }
            _ => return Err(self.error("expression")),
        };
        Ok(Expr { kind, line })
    }
}

fn to_lvalue(e: &Expr) -> Option<LValue> {
    match &e.kind {
        ExprKind::Name(n) => Some(LValue::Var(n.clone())),
        ExprKind::Field { .. } => field_path(e).map(LValue::Field),
        ExprKind::Index { base, index } => Some(LValue::Element {
            array: Box::new(to_lvalue(base)?),
            index: (**index).clone(),
        }),
        _ => None,
    }
}

/// `a.b.c` / `this.f` as a list of segments, when the expression is a pure
/// field path.
pub fn field_path(e: &Expr) -> Option<Vec<String>> {
    match &e.kind {
        ExprKind::Name(n) => Some(vec![n.clone()]),
        ExprKind::This => Some(vec!["this".into()]),
        ExprKind::Field { base, name } => {
            let mut p = field_path(base)?;
            p.push(name.clone());
            Some(p)
        }
        _ => None,
    }
}

/// Rejects a use of a local that is only declared later in the method.
/// Names never declared in the method (fields, implicit locals) are exempt.
fn check_declared_before_use(m: &MethodDecl) -> PResult<()> {
    let mut decl_lines: HashMap<&str, u32> = HashMap::new();
    walk_stmts(&m.body, &mut |s| {
        if let StmtKind::VarDecl { name, .. } = &s.kind {
            decl_lines.entry(name.as_str()).or_insert(s.line);
        }
    });

    let mut known: HashSet<String> = m.params.iter().map(|p| p.name.clone()).collect();
    let mut failure = None;
    walk_stmts(&m.body, &mut |s| {
        if failure.is_some() {
            return;
        }
        let mut used = Vec::new();
        stmt_reads(s, &mut used);
        for name in used {
            if !known.contains(&name) && decl_lines.contains_key(name.as_str()) {
                failure = Some(ParseError {
                    line: s.line,
                    col: 1,
                    expected: format!("declaration of `{name}` before its use"),
                    found: format!("use of `{name}`"),
                });
                return;
            }
        }
        match &s.kind {
            StmtKind::VarDecl { name, .. } => {
                known.insert(name.clone());
            }
            StmtKind::Assign {
                target: LValue::Var(name),
                ..
            } => {
                known.insert(name.clone());
            }
            _ => {}
        }
    });
    failure.map_or(Ok(()), Err)
}

// Names read by the statement itself, excluding nested statements.
fn stmt_reads(s: &Stmt, out: &mut Vec<String>) {
    match &s.kind {
        StmtKind::Assign { target, op, value } => {
            lvalue_reads(target, matches!(op, AssignOp::Set), out);
            if let Some(v) = value {
                expr_names(v, out);
            }
        }
        StmtKind::VarDecl { init: Some(e), .. } => expr_names(e, out),
        StmtKind::Call(c) => call_names(c, out),
        StmtKind::If { cond, .. } | StmtKind::While { cond, .. } => expr_names(cond, out),
        StmtKind::For { cond: Some(c), .. } => expr_names(c, out),
        StmtKind::Switch { scrutinee, .. } => expr_names(scrutinee, out),
        StmtKind::Return(Some(e)) | StmtKind::Throw(e) => expr_names(e, out),
        _ => {}
    }
}

fn lvalue_reads(l: &LValue, plain_set: bool, out: &mut Vec<String>) {
    match l {
        LValue::Var(n) if !plain_set => out.push(n.clone()),
        LValue::Var(_) => {}
        LValue::Field(path) => {
            if path[0] != "this" {
                out.push(path[0].clone());
            }
        }
        LValue::Element { array, index } => {
            lvalue_reads(array, false, out);
            expr_names(index, out);
        }
    }
}

fn call_names(c: &CallExpr, out: &mut Vec<String>) {
    if let Some(r) = &c.receiver {
        expr_names(r, out);
    }
    for a in &c.args {
        expr_names(a, out);
    }
}

fn expr_names(e: &Expr, out: &mut Vec<String>) {
    match &e.kind {
        ExprKind::Name(n) => out.push(n.clone()),
        ExprKind::Field { base, .. } => expr_names(base, out),
        ExprKind::Index { base, index } => {
            expr_names(base, out);
            expr_names(index, out);
        }
        ExprKind::Call(c) => call_names(c, out),
        ExprKind::New { args, .. } => args.iter().for_each(|a| expr_names(a, out)),
        ExprKind::Unary { operand, .. } => expr_names(operand, out),
        ExprKind::Binary { lhs, rhs, .. } => {
            expr_names(lhs, out);
            expr_names(rhs, out);
        }
        ExprKind::Ternary {
            cond,
            then_expr,
            else_expr,
        } => {
            expr_names(cond, out);
            expr_names(then_expr, out);
            expr_names(else_expr, out);
        }
        ExprKind::Literal(_) | ExprKind::This => {}
    }
}
