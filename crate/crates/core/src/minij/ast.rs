//! MiniJ abstract syntax tree.
//!
//! Every statement and expression carries the source line it starts on.
//! Structural comparisons that should ignore positions go through
//! [`Program::without_positions`].

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Program {
    pub methods: Vec<MethodDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodDecl {
    /// Declared return type; constructors have none.
    pub ret_type: Option<String>,
    pub name: String,
    pub params: Vec<Param>,
    pub body: Block,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub ty: Option<String>,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stmt {
    pub kind: StmtKind,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StmtKind {
    /// `target op value`; `value` is `None` exactly for `++`/`--`.
    Assign {
        target: LValue,
        op: AssignOp,
        value: Option<Expr>,
    },
    /// `ty name = init`; `ty` is `None` for `var`.
    VarDecl {
        ty: Option<String>,
        name: String,
        init: Option<Expr>,
    },
    Call(CallExpr),
    If {
        cond: Expr,
        then_block: Block,
        else_block: Option<Block>,
    },
    While {
        cond: Expr,
        body: Block,
    },
    For {
        init: Vec<Stmt>,
        cond: Option<Expr>,
        update: Vec<Stmt>,
        body: Block,
    },
    Switch {
        scrutinee: Expr,
        cases: Vec<SwitchCase>,
    },
    Break,
    Continue,
    Return(Option<Expr>),
    Throw(Expr),
    Block(Block),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchCase {
    pub label: CaseLabel,
    pub body: Block,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    Value(Expr),
    Default,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssignOp {
    Set,
    Compound(BinaryOp),
    Increment,
    Decrement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LValue {
    Var(String),
    /// Dotted path, root first. The root may be `this`.
    Field(Vec<String>),
    Element {
        array: Box<LValue>,
        index: Expr,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExprKind {
    Literal(String),
    Name(String),
    This,
    Field {
        base: Box<Expr>,
        name: String,
    },
    Index {
        base: Box<Expr>,
        index: Box<Expr>,
    },
    Call(CallExpr),
    New {
        class: String,
        args: Vec<Expr>,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Ternary {
        cond: Box<Expr>,
        then_expr: Box<Expr>,
        else_expr: Box<Expr>,
    },
}

/// A method invocation. `this(...)` and `super(...)` have no receiver and
/// use `this`/`super` as the callee name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallExpr {
    pub receiver: Option<Box<Expr>>,
    pub name: String,
    pub args: Vec<Expr>,
    pub line: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnaryOp {
    Not,
    Neg,
    Plus,
    BitNot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinaryOp {
    Mul,
    Div,
    Rem,
    Add,
    Sub,
    Shl,
    Shr,
    Ushr,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    BitAnd,
    BitXor,
    BitOr,
    And,
    Or,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        use BinaryOp::*;
        match self {
            Mul => "*",
            Div => "/",
            Rem => "%",
            Add => "+",
            Sub => "-",
            Shl => "<<",
            Shr => ">>",
            Ushr => ">>>",
            Lt => "<",
            Gt => ">",
            Le => "<=",
            Ge => ">=",
            Eq => "==",
            Ne => "!=",
            BitAnd => "&",
            BitXor => "^",
            BitOr => "|",
            And => "&&",
            Or => "||",
        }
    }

    /// Binding strength; higher binds tighter. Ternary sits at 1.
    pub fn precedence(self) -> u8 {
        use BinaryOp::*;
        match self {
            Mul | Div | Rem => 11,
            Add | Sub => 10,
            Shl | Shr | Ushr => 9,
            Lt | Gt | Le | Ge => 8,
            Eq | Ne => 7,
            BitAnd => 6,
            BitXor => 5,
            BitOr => 4,
            And => 3,
            Or => 2,
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Self> {
        use BinaryOp::*;
        Some(match sym {
            "*" => Mul,
            "/" => Div,
            "%" => Rem,
            "+" => Add,
            "-" => Sub,
            "<<" => Shl,
            ">>" => Shr,
            ">>>" => Ushr,
            "<" => Lt,
            ">" => Gt,
            "<=" => Le,
            ">=" => Ge,
            "==" => Eq,
            "!=" => Ne,
            "&" => BitAnd,
            "^" => BitXor,
            "|" => BitOr,
            "&&" => And,
            "||" => Or,
            _ => return None,
        })
    }
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Neg => "-",
            UnaryOp::Plus => "+",
            UnaryOp::BitNot => "~",
        }
    }
}

impl Program {
    pub fn method(&self, name: &str) -> Option<&MethodDecl> {
        self.methods.iter().find(|m| m.name == name)
    }

    /// Copy with every line number zeroed, for structural comparison.
    pub fn without_positions(&self) -> Program {
        let mut p = self.clone();
        for m in &mut p.methods {
            m.line = 0;
            strip_block(&mut m.body);
        }
        p
    }
}

fn strip_block(b: &mut Block) {
    b.line = 0;
    b.stmts.iter_mut().for_each(strip_stmt);
}

fn strip_stmt(s: &mut Stmt) {
    s.line = 0;
    match &mut s.kind {
        StmtKind::Assign { target, value, .. } => {
            strip_lvalue(target);
            if let Some(v) = value {
                strip_expr(v);
            }
        }
        StmtKind::VarDecl { init, .. } => {
            if let Some(e) = init {
                strip_expr(e);
            }
        }
        StmtKind::Call(c) => strip_call(c),
        StmtKind::If {
            cond,
            then_block,
            else_block,
        } => {
            strip_expr(cond);
            strip_block(then_block);
            if let Some(b) = else_block {
                strip_block(b);
            }
        }
        StmtKind::While { cond, body } => {
            strip_expr(cond);
            strip_block(body);
        }
        StmtKind::For {
            init,
            cond,
            update,
            body,
        } => {
            init.iter_mut().for_each(strip_stmt);
            if let Some(c) = cond {
                strip_expr(c);
            }
            update.iter_mut().for_each(strip_stmt);
            strip_block(body);
        }
        StmtKind::Switch { scrutinee, cases } => {
            strip_expr(scrutinee);
            for c in cases {
                c.line = 0;
                if let CaseLabel::Value(e) = &mut c.label {
                    strip_expr(e);
                }
                strip_block(&mut c.body);
            }
        }
        StmtKind::Return(e) => {
            if let Some(e) = e {
                strip_expr(e);
            }
        }
        StmtKind::Throw(e) => strip_expr(e),
        StmtKind::Block(b) => strip_block(b),
        StmtKind::Break | StmtKind::Continue => {}
    }
}

fn strip_lvalue(l: &mut LValue) {
    if let LValue::Element { array, index } = l {
        strip_lvalue(array);
        strip_expr(index);
    }
}

fn strip_call(c: &mut CallExpr) {
    c.line = 0;
    if let Some(r) = &mut c.receiver {
        strip_expr(r);
    }
    c.args.iter_mut().for_each(strip_expr);
}

fn strip_expr(e: &mut Expr) {
    e.line = 0;
    match &mut e.kind {
        ExprKind::Field { base, .. } => strip_expr(base),
        ExprKind::Index { base, index } => {
            strip_expr(base);
            strip_expr(index);
        }
        ExprKind::Call(c) => strip_call(c),
        ExprKind::New { args, .. } => args.iter_mut().for_each(strip_expr),
        ExprKind::Unary { operand, .. } => strip_expr(operand),
        ExprKind::Binary { lhs, rhs, .. } => {
            strip_expr(lhs);
            strip_expr(rhs);
        }
        ExprKind::Ternary {
            cond,
            then_expr,
            else_expr,
        } => {
            strip_expr(cond);
            strip_expr(then_expr);
            strip_expr(else_expr);
        }
        ExprKind::Literal(_) | ExprKind::Name(_) | ExprKind::This => {}
    }
}

/// Visits statements in source order, descending into nested blocks.
pub fn walk_stmts<'a>(block: &'a Block, f: &mut dyn FnMut(&'a Stmt)) {
    for s in &block.stmts {
        // a for header's condition is evaluated after its init statements
        if let StmtKind::For { init, .. } = &s.kind {
            init.iter().for_each(&mut *f);
        }
        f(s);
        match &s.kind {
            StmtKind::If {
                then_block,
                else_block,
                ..
            } => {
                walk_stmts(then_block, f);
                if let Some(b) = else_block {
                    walk_stmts(b, f);
                }
            }
            StmtKind::While { body, .. } => walk_stmts(body, f),
            StmtKind::For { update, body, .. } => {
                walk_stmts(body, f);
                for s in update {
                    f(s);
                }
            }
            StmtKind::Switch { cases, .. } => {
                for c in cases {
                    walk_stmts(&c.body, f);
                }
            }
            StmtKind::Block(b) => walk_stmts(b, f),
            _ => {}
        }
    }
}
