//! Canonical MiniJ printing. Expression text produced here is also what the
//! flow-graph builder uses for node labels.

use std::fmt::Write;

use super::ast::*;

const TERNARY_PREC: u8 = 1;
const UNARY_PREC: u8 = 12;
const POSTFIX_PREC: u8 = 13;

fn expr_prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Ternary { .. } => TERNARY_PREC,
        ExprKind::Binary { op, .. } => op.precedence(),
        ExprKind::Unary { .. } => UNARY_PREC,
        _ => POSTFIX_PREC,
    }
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_operand(out: &mut String, e: &Expr, min_prec: u8) {
    if expr_prec(e) < min_prec {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Literal(t) | ExprKind::Name(t) => out.push_str(t),
        ExprKind::This => out.push_str("this"),
        ExprKind::Field { base, name } => {
            write_operand(out, base, POSTFIX_PREC);
            out.push('.');
            out.push_str(name);
        }
        ExprKind::Index { base, index } => {
            write_operand(out, base, POSTFIX_PREC);
            out.push('[');
            write_expr(out, index);
            out.push(']');
        }
        ExprKind::Call(c) => write_call(out, c),
        ExprKind::New { class, args } => {
            let _ = write!(out, "new {class}");
            write_args(out, args);
        }
        ExprKind::Unary { op, operand } => {
            out.push_str(op.symbol());
            // keep `- -x` from printing as the `--` token
            if let ExprKind::Unary { op: inner, .. } = &operand.kind {
                if matches!(
                    (op, inner),
                    (UnaryOp::Neg, UnaryOp::Neg) | (UnaryOp::Plus, UnaryOp::Plus)
                ) {
                    out.push(' ');
                }
            }
            write_operand(out, operand, UNARY_PREC);
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let p = op.precedence();
            write_operand(out, lhs, p);
            let _ = write!(out, " {} ", op.symbol());
            write_operand(out, rhs, p + 1);
        }
        ExprKind::Ternary {
            cond,
            then_expr,
            else_expr,
        } => {
            write_operand(out, cond, TERNARY_PREC + 1);
            out.push_str(" ? ");
            write_operand(out, then_expr, TERNARY_PREC);
            out.push_str(" : ");
            write_operand(out, else_expr, TERNARY_PREC);
        }
    }
}

pub fn call_to_string(c: &CallExpr) -> String {
    let mut s = String::new();
    write_call(&mut s, c);
    s
}

fn write_call(out: &mut String, c: &CallExpr) {
    if let Some(r) = &c.receiver {
        write_operand(out, r, POSTFIX_PREC);
        out.push('.');
    }
    out.push_str(&c.name);
    write_args(out, &c.args);
}

fn write_args(out: &mut String, args: &[Expr]) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_expr(out, a);
    }
    out.push(')');
}

pub fn lvalue_to_string(l: &LValue) -> String {
    match l {
        LValue::Var(n) => n.clone(),
        LValue::Field(p) => p.join("."),
        LValue::Element { array, index } => {
            format!("{}[{}]", lvalue_to_string(array), expr_to_string(index))
        }
    }
}

/// Text of a simple statement without the trailing `;`. Declarations keep
/// their type unless `with_type` is false.
pub fn simple_stmt_to_string(kind: &StmtKind, with_type: bool) -> Option<String> {
    Some(match kind {
        StmtKind::Assign { target, op, value } => {
            let lhs = lvalue_to_string(target);
            match (op, value) {
                (AssignOp::Increment, _) => format!("{lhs}++"),
                (AssignOp::Decrement, _) => format!("{lhs}--"),
                (AssignOp::Set, Some(v)) => format!("{lhs} = {}", expr_to_string(v)),
                (AssignOp::Compound(b), Some(v)) => {
                    format!("{lhs} {}= {}", b.symbol(), expr_to_string(v))
                }
                (_, None) => lhs,
            }
        }
        StmtKind::VarDecl { ty, name, init } => {
            let mut s = String::new();
            if with_type {
                s.push_str(ty.as_deref().unwrap_or("var"));
                s.push(' ');
            }
            s.push_str(name);
            if let Some(e) = init {
                let _ = write!(s, " = {}", expr_to_string(e));
            }
            s
        }
        StmtKind::Call(c) => call_to_string(c),
        _ => return None,
    })
}

/// Pretty-prints a whole program with four-space indentation.
pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for (i, m) in p.methods.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if let Some(t) = &m.ret_type {
            let _ = write!(out, "{t} ");
        }
        out.push_str(&m.name);
        out.push('(');
        for (j, param) in m.params.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            if let Some(t) = &param.ty {
                let _ = write!(out, "{t} ");
            }
            out.push_str(&param.name);
        }
        out.push_str(") ");
        write_block(&mut out, &m.body, 0);
        out.push('\n');
    }
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

fn write_block(out: &mut String, b: &Block, depth: usize) {
    out.push_str("{\n");
    for s in &b.stmts {
        write_stmt(out, s, depth + 1);
    }
    indent(out, depth);
    out.push('}');
}

fn write_stmt(out: &mut String, s: &Stmt, depth: usize) {
    indent(out, depth);
    if let Some(text) = simple_stmt_to_string(&s.kind, true) {
        let _ = writeln!(out, "{text};");
        return;
    }
    match &s.kind {
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => {
            let _ = write!(out, "if ({}) ", expr_to_string(cond));
            write_block(out, then_block, depth);
            if let Some(b) = else_block {
                out.push_str(" else ");
                write_block(out, b, depth);
            }
        }
        StmtKind::While { cond, body } => {
            let _ = write!(out, "while ({}) ", expr_to_string(cond));
            write_block(out, body, depth);
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            let join = |v: &[Stmt]| {
                v.iter()
                    .filter_map(|s| simple_stmt_to_string(&s.kind, true))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let cond = cond.as_ref().map(expr_to_string).unwrap_or_default();
            let _ = write!(out, "for ({}; {}; {}) ", join(init), cond, join(update));
            write_block(out, body, depth);
        }
        StmtKind::Switch { scrutinee, cases } => {
            let _ = writeln!(out, "switch ({}) {{", expr_to_string(scrutinee));
            for c in cases {
                indent(out, depth + 1);
                match &c.label {
                    CaseLabel::Value(e) => {
                        let _ = writeln!(out, "case {}:", expr_to_string(e));
                    }
                    CaseLabel::Default => out.push_str("default:\n"),
                }
                for s in &c.body.stmts {
                    write_stmt(out, s, depth + 2);
                }
            }
            indent(out, depth);
            out.push('}');
        }
        StmtKind::Break => out.push_str("break;"),
        StmtKind::Continue => out.push_str("continue;"),
        StmtKind::Return(None) => out.push_str("return;"),
        StmtKind::Return(Some(e)) => {
            let _ = write!(out, "return {};", expr_to_string(e));
        }
        StmtKind::Throw(e) => {
            let _ = write!(out, "throw {};", expr_to_string(e));
        }
        StmtKind::Block(b) => write_block(out, b, depth),
        StmtKind::Assign { .. } | StmtKind::VarDecl { .. } | StmtKind::Call(_) => unreachable!(),
    }
    out.push('\n');
}
