//! Lowering of a MiniJ method into a control-flow graph.
//!
//! Statements become nodes; `break`/`continue`/`return`/`throw` become edges.
//! A `return expr` / `throw expr` additionally gets a node defining
//! `<ret>` / `<exc>` in front of its jump edge. Calls are hoisted out of the
//! enclosing expression into call-param nodes, innermost first.

use std::collections::BTreeSet;

use thiserror::Error;

use super::model::*;
use crate::minij::ast::*;
use crate::minij::pretty::{call_to_string, expr_to_string, simple_stmt_to_string};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("method `{0}` not found")]
    NoSuchMethod(String),
    #[error("line {line}: unreachable statement")]
    Unreachable { line: u32 },
}

#[derive(Debug, Clone, Copy)]
struct Pending {
    src: NodeId,
    branch: BranchKind,
    jump: Option<JumpKind>,
}

impl Pending {
    fn flow(src: NodeId, branch: BranchKind) -> Self {
        Pending {
            src,
            branch,
            jump: None,
        }
    }

    fn jumping(self, jump: JumpKind) -> Self {
        Pending {
            jump: Some(jump),
            ..self
        }
    }
}

enum Frame {
    Loop {
        breaks: Vec<Pending>,
        continues: Vec<Pending>,
    },
    Switch {
        breaks: Vec<Pending>,
    },
}

struct Builder<'p> {
    program: &'p Program,
    nodes: Vec<FlowNode>,
    edges: Vec<CfgEdge>,
    frames: Vec<Frame>,
    to_exit: Vec<Pending>,
}

/// Builds the control-flow part of the flow graph of `method`; the returned
/// graph has no data-flow edges yet.
pub fn build_cfg(program: &Program, method: &str) -> Result<FlowGraph, BuildError> {
    let decl = program
        .method(method)
        .ok_or_else(|| BuildError::NoSuchMethod(method.to_string()))?;

    let mut b = Builder {
        program,
        nodes: Vec::new(),
        edges: Vec::new(),
        frames: Vec::new(),
        to_exit: Vec::new(),
    };
    let entry = b.add_node(
        NodeKind::Entry,
        "entry".into(),
        decl.line,
        BTreeSet::new(),
        BTreeSet::new(),
        Vec::new(),
    );
    let out = b.block(&decl.body, vec![Pending::flow(entry, BranchKind::Seq)])?;

    let last_line = b.nodes.iter().map(|n| n.line).max().unwrap_or(decl.line);
    let exit = b.add_node(
        NodeKind::Exit,
        "exit".into(),
        last_line,
        BTreeSet::new(),
        BTreeSet::new(),
        out,
    );
    let to_exit = std::mem::take(&mut b.to_exit);
    b.connect(to_exit, exit);

    b.edges.sort();
    b.edges.dedup();

    Ok(FlowGraph {
        nodes: b.nodes.into_iter().map(|n| (n.id, n)).collect(),
        cfg: b.edges,
        dfg: Vec::new(),
        entry,
        exit,
    })
}

impl<'p> Builder<'p> {
    fn add_node(
        &mut self,
        kind: NodeKind,
        label: String,
        line: u32,
        defs: BTreeSet<Variable>,
        uses: BTreeSet<Variable>,
        incoming: Vec<Pending>,
    ) -> NodeId {
        let id = self.nodes.len() as NodeId;
        self.nodes.push(FlowNode {
            id,
            kind,
            label,
            line,
            defs,
            uses,
        });
        self.connect(incoming, id);
        id
    }

    fn connect(&mut self, pending: Vec<Pending>, dst: NodeId) {
        for p in pending {
            self.edges.push(CfgEdge {
                src: p.src,
                dst,
                kind: EdgeKind {
                    branch: p.branch,
                    jump: p.jump,
                },
            });
        }
    }

    fn block(
        &mut self,
        block: &Block,
        mut incoming: Vec<Pending>,
    ) -> Result<Vec<Pending>, BuildError> {
        for s in &block.stmts {
            incoming = self.stmt(s, incoming)?;
        }
        Ok(incoming)
    }

    fn stmt(&mut self, s: &Stmt, incoming: Vec<Pending>) -> Result<Vec<Pending>, BuildError> {
        let produces_nothing = match &s.kind {
            StmtKind::VarDecl { init: None, .. } => true,
            StmtKind::Block(b) => b.stmts.is_empty(),
            _ => false,
        };
        if produces_nothing {
            return Ok(incoming);
        }
        if incoming.is_empty() {
            return Err(BuildError::Unreachable { line: s.line });
        }

        let line = s.line;
        match &s.kind {
            StmtKind::Assign { target, op, value } => {
                let mut pending = incoming;
                if let LValue::Element { .. } = target {
                    pending = self.hoist_lvalue(target, pending);
                }
                if let Some(v) = value {
                    pending = self.hoist(v, pending);
                }
                let mut uses = BTreeSet::new();
                lvalue_uses(target, !matches!(op, AssignOp::Set), &mut uses);
                if let Some(v) = value {
                    expr_uses(v, &mut uses);
                }
                let defs = BTreeSet::from([lvalue_var(target)]);
                let label = simple_stmt_to_string(&s.kind, false).unwrap_or_default();
                let id = self.add_node(NodeKind::Statement, label, line, defs, uses, pending);
                Ok(vec![Pending::flow(id, BranchKind::Seq)])
            }
            StmtKind::VarDecl {
                name,
                init: Some(init),
                ..
            } => {
                let pending = self.hoist(init, incoming);
                let mut uses = BTreeSet::new();
                expr_uses(init, &mut uses);
                let defs = BTreeSet::from([Variable::new(name.clone())]);
                let label = simple_stmt_to_string(&s.kind, false).unwrap_or_default();
                let id = self.add_node(NodeKind::Statement, label, line, defs, uses, pending);
                Ok(vec![Pending::flow(id, BranchKind::Seq)])
            }
            StmtKind::VarDecl { init: None, .. } => Ok(incoming),
            StmtKind::Call(call) => {
                let pending = self.hoist_call_parts(call, incoming);
                let id = self.call_node(call, false, pending);
                Ok(vec![Pending::flow(id, BranchKind::Call)])
            }
            StmtKind::If {
                cond,
                then_block,
                else_block,
            } => {
                let pending = self.hoist(cond, incoming);
                let p = self.predicate(
                    format!("if ({})", expr_to_string(cond)),
                    cond,
                    line,
                    pending,
                );
                let mut out = self.block(then_block, vec![Pending::flow(p, BranchKind::True)])?;
                let false_edge = vec![Pending::flow(p, BranchKind::False)];
                match else_block {
                    Some(b) => out.extend(self.block(b, false_edge)?),
                    None => out.extend(false_edge),
                }
                Ok(out)
            }
            StmtKind::While { cond, body } => {
                let label = format!("while ({})", expr_to_string(cond));
                self.lower_loop(label, Some(cond), &[], body, line, incoming)
            }
            StmtKind::For {
                init,
                cond,
                update,
                body,
            } => {
                let mut pending = incoming;
                for s in init {
                    pending = self.stmt(s, pending)?;
                }
                let label = match cond {
                    Some(c) => format!("for ({})", expr_to_string(c)),
                    None => "for (;;)".to_string(),
                };
                self.lower_loop(label, cond.as_ref(), update, body, line, pending)
            }
            StmtKind::Switch { scrutinee, cases } => {
                let pending = self.hoist(scrutinee, incoming);
                let label = format!("switch ({})", expr_to_string(scrutinee));
                let sw = self.predicate(label, scrutinee, line, pending);

                self.frames.push(Frame::Switch { breaks: Vec::new() });
                let mut carried: Vec<Pending> = Vec::new();
                let mut has_default = false;
                for case in cases {
                    let mut incoming: Vec<Pending> = carried
                        .into_iter()
                        .map(|p| match (p.branch, p.jump) {
                            (BranchKind::Seq, None) => Pending {
                                branch: BranchKind::Fallthrough,
                                ..p
                            },
                            _ => p,
                        })
                        .collect();
                    match case.label {
                        CaseLabel::Value(_) => incoming.push(Pending::flow(sw, BranchKind::Case)),
                        CaseLabel::Default => {
                            has_default = true;
                            incoming.push(Pending::flow(sw, BranchKind::False));
                        }
                    }
                    carried = match self.block(&case.body, incoming) {
                        Ok(out) => out,
                        Err(e) => {
                            self.frames.pop();
                            return Err(e);
                        }
                    };
                }
                let Some(Frame::Switch { breaks }) = self.frames.pop() else {
                    unreachable!()
                };
                let mut out = carried;
                if !has_default {
                    out.push(Pending::flow(sw, BranchKind::False));
                }
                out.extend(breaks);
                Ok(out)
            }
            StmtKind::Break => {
                let frame = self
                    .frames
                    .last_mut()
                    .expect("parser rejects break outside loop/switch");
                let breaks = match frame {
                    Frame::Loop { breaks, .. } | Frame::Switch { breaks } => breaks,
                };
                breaks.extend(incoming.into_iter().map(|p| p.jumping(JumpKind::Break)));
                Ok(Vec::new())
            }
            StmtKind::Continue => {
                let continues = self
                    .frames
                    .iter_mut()
                    .rev()
                    .find_map(|f| match f {
                        Frame::Loop { continues, .. } => Some(continues),
                        Frame::Switch { .. } => None,
                    })
                    .expect("parser rejects continue outside loop");
                continues.extend(incoming.into_iter().map(|p| p.jumping(JumpKind::Continue)));
                Ok(Vec::new())
            }
            StmtKind::Return(None) => {
                self.to_exit
                    .extend(incoming.into_iter().map(|p| p.jumping(JumpKind::Return)));
                Ok(Vec::new())
            }
            StmtKind::Return(Some(e)) => {
                self.jump_value(
                    format!("return {}", expr_to_string(e)),
                    e,
                    Variable::ret(),
                    JumpKind::Return,
                    line,
                    incoming,
                );
                Ok(Vec::new())
            }
            StmtKind::Throw(e) => {
                self.jump_value(
                    format!("throw {}", expr_to_string(e)),
                    e,
                    Variable::exc(),
                    JumpKind::Throw,
                    line,
                    incoming,
                );
                Ok(Vec::new())
            }
            StmtKind::Block(b) => self.block(b, incoming),
        }
    }

    fn jump_value(
        &mut self,
        label: String,
        e: &Expr,
        target: Variable,
        jump: JumpKind,
        line: u32,
        incoming: Vec<Pending>,
    ) {
        let pending = self.hoist(e, incoming);
        let mut uses = BTreeSet::new();
        expr_uses(e, &mut uses);
        let id = self.add_node(
            NodeKind::Statement,
            label,
            line,
            BTreeSet::from([target]),
            uses,
            pending,
        );
        self.to_exit
            .push(Pending::flow(id, BranchKind::Seq).jumping(jump));
    }

    fn predicate(
        &mut self,
        label: String,
        cond: &Expr,
        line: u32,
        incoming: Vec<Pending>,
    ) -> NodeId {
        let mut uses = BTreeSet::new();
        expr_uses(cond, &mut uses);
        self.add_node(
            NodeKind::Predicate,
            label,
            line,
            BTreeSet::new(),
            uses,
            incoming,
        )
    }

    fn lower_loop(
        &mut self,
        label: String,
        cond: Option<&Expr>,
        update: &[Stmt],
        body: &Block,
        line: u32,
        incoming: Vec<Pending>,
    ) -> Result<Vec<Pending>, BuildError> {
        // The loop header is the first node of the condition evaluation:
        // a hoisted call if the condition has one, else the predicate.
        let header = self.nodes.len() as NodeId;
        let pending = match cond {
            Some(c) => self.hoist(c, incoming),
            None => incoming,
        };
        let p = match cond {
            Some(c) => self.predicate(label, c, line, pending),
            None => self.add_node(
                NodeKind::Predicate,
                label,
                line,
                BTreeSet::new(),
                BTreeSet::new(),
                pending,
            ),
        };

        self.frames.push(Frame::Loop {
            breaks: Vec::new(),
            continues: Vec::new(),
        });
        let body_out = self.block(body, vec![Pending::flow(p, BranchKind::True)]);
        let Some(Frame::Loop { breaks, continues }) = self.frames.pop() else {
            unreachable!()
        };
        let mut back = body_out?;
        back.extend(continues);

        if !update.is_empty() && !back.is_empty() {
            for s in update {
                back = self.stmt(s, back)?;
            }
        }
        self.connect(back, header);

        let mut out = vec![Pending::flow(p, BranchKind::False)];
        out.extend(breaks);
        Ok(out)
    }

    /// Emits call nodes for every call inside `e`, in evaluation order.
    fn hoist(&mut self, e: &Expr, mut pending: Vec<Pending>) -> Vec<Pending> {
        match &e.kind {
            ExprKind::Call(c) => {
                pending = self.hoist_call_parts(c, pending);
                let id = self.call_node(c, true, pending);
                vec![Pending::flow(id, BranchKind::Call)]
            }
            ExprKind::Field { base, .. } => self.hoist(base, pending),
            ExprKind::Index { base, index } => {
                pending = self.hoist(base, pending);
                self.hoist(index, pending)
            }
            ExprKind::New { args, .. } => args.iter().fold(pending, |p, a| self.hoist(a, p)),
            ExprKind::Unary { operand, .. } => self.hoist(operand, pending),
            ExprKind::Binary { lhs, rhs, .. } => {
                pending = self.hoist(lhs, pending);
                self.hoist(rhs, pending)
            }
            ExprKind::Ternary {
                cond,
                then_expr,
                else_expr,
            } => {
                pending = self.hoist(cond, pending);
                pending = self.hoist(then_expr, pending);
                self.hoist(else_expr, pending)
            }
            ExprKind::Literal(_) | ExprKind::Name(_) | ExprKind::This => pending,
        }
    }

    fn hoist_lvalue(&mut self, l: &LValue, pending: Vec<Pending>) -> Vec<Pending> {
        match l {
            LValue::Element { array, index } => {
                let pending = self.hoist_lvalue(array, pending);
                self.hoist(index, pending)
            }
            _ => pending,
        }
    }

    fn hoist_call_parts(&mut self, c: &CallExpr, mut pending: Vec<Pending>) -> Vec<Pending> {
        if let Some(r) = &c.receiver {
            pending = self.hoist(r, pending);
        }
        c.args.iter().fold(pending, |p, a| self.hoist(a, p))
    }

    fn call_node(&mut self, c: &CallExpr, consumed: bool, incoming: Vec<Pending>) -> NodeId {
        let mut uses = BTreeSet::new();
        if let Some(r) = &c.receiver {
            receiver_uses(r, &mut uses);
        }
        for a in &c.args {
            expr_uses(a, &mut uses);
        }
        let mut defs = BTreeSet::new();
        let local_target = c
            .receiver
            .as_deref()
            .is_none_or(|r| matches!(r.kind, ExprKind::This));
        if local_target && c.name != "this" && c.name != "super" {
            if let Some(m) = self
                .program
                .methods
                .iter()
                .find(|m| m.name == c.name && m.params.len() == c.args.len())
            {
                defs.extend(
                    m.params
                        .iter()
                        .map(|p| Variable::new(format!("{}::{}", m.name, p.name))),
                );
            }
        }
        if consumed {
            defs.insert(Variable::ret());
        }
        self.add_node(
            NodeKind::CallParam,
            call_to_string(c),
            c.line,
            defs,
            uses,
            incoming,
        )
    }
}

fn is_type_name(segment: &str) -> bool {
    segment
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_uppercase())
}

/// The variable a read of `e` denotes, when `e` is a plain name or a field
/// path. A qualified path rooted at a type name (`Token.BLOCK`) is a single
/// static variable.
fn path_var(e: &Expr) -> Option<(Variable, Option<Variable>)> {
    let path = crate::minij::field_path(e)?;
    let var = Variable::new(path.join("."));
    let root = match path.as_slice() {
        [_] => None,
        [root, ..] if root == "this" || is_type_name(root) => None,
        [root, ..] => Some(Variable::new(root.clone())),
        [] => None,
    };
    if path == ["this"] {
        return None;
    }
    Some((var, root))
}

fn receiver_uses(r: &Expr, out: &mut BTreeSet<Variable>) {
    match crate::minij::field_path(r) {
        Some(p) if p.len() == 1 && is_type_name(&p[0]) => {}
        _ => expr_uses(r, out),
    }
}

/// Variables read by `e`, with calls standing for `<ret>`.
pub(crate) fn expr_uses(e: &Expr, out: &mut BTreeSet<Variable>) {
    if let Some((var, root)) = path_var(e) {
        out.insert(var);
        out.extend(root);
        return;
    }
    match &e.kind {
        ExprKind::Field { base, .. } => expr_uses(base, out),
        ExprKind::Index { base, index } => {
            match array_var(base) {
                Some((arr, root)) => {
                    out.insert(arr);
                    out.extend(root);
                    let mut inner = base.as_ref();
                    while let ExprKind::Index { base, index } = &inner.kind {
                        expr_uses(index, out);
                        inner = base;
                    }
                }
                None => expr_uses(base, out),
            }
            expr_uses(index, out);
        }
        ExprKind::Call(_) => {
            out.insert(Variable::ret());
        }
        ExprKind::New { args, .. } => args.iter().for_each(|a| expr_uses(a, out)),
        ExprKind::Unary { operand, .. } => expr_uses(operand, out),
        ExprKind::Binary { lhs, rhs, .. } => {
            expr_uses(lhs, out);
            expr_uses(rhs, out);
        }
        ExprKind::Ternary {
            cond,
            then_expr,
            else_expr,
        } => {
            expr_uses(cond, out);
            expr_uses(then_expr, out);
            expr_uses(else_expr, out);
        }
        ExprKind::Literal(_) | ExprKind::Name(_) | ExprKind::This => {}
    }
}

/// Array base variable (`a[]`) for an indexed expression's base, collapsing
/// nested indexing onto the outermost array.
fn array_var(base: &Expr) -> Option<(Variable, Option<Variable>)> {
    match &base.kind {
        ExprKind::Index { base, .. } => array_var(base),
        _ => {
            let (var, root) = path_var(base)?;
            Some((Variable::new(format!("{var}[]")), root))
        }
    }
}

fn lvalue_var(l: &LValue) -> Variable {
    match l {
        LValue::Var(n) => Variable::new(n.clone()),
        LValue::Field(p) => Variable::new(p.join(".")),
        LValue::Element { array, .. } => {
            let mut root = array.as_ref();
            while let LValue::Element { array, .. } = root {
                root = array;
            }
            Variable::new(format!("{}[]", lvalue_var(root)))
        }
    }
}

/// Reads performed by writing `l`: index expressions, the base object of a
/// field path, and the target itself for compound updates.
fn lvalue_uses(l: &LValue, reads_target: bool, out: &mut BTreeSet<Variable>) {
    if reads_target {
        out.insert(lvalue_var(l));
    }
    match l {
        LValue::Var(_) => {}
        LValue::Field(p) => {
            if p[0] != "this" && !is_type_name(&p[0]) {
                out.insert(Variable::new(p[0].clone()));
            }
        }
        LValue::Element { array, index } => {
            lvalue_uses(array, false, out);
            expr_uses(index, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minij::parse_source;

    fn build(src: &str, method: &str) -> FlowGraph {
        let p = parse_source(src).unwrap();
        build_cfg(&p, method).unwrap()
    }

    fn find(g: &FlowGraph, label: &str) -> NodeId {
        g.nodes
            .values()
            .find(|n| n.label == label)
            .unwrap_or_else(|| {
                panic!(
                    "no node `{label}` in {:#?}",
                    g.nodes.values().map(|n| &n.label).collect::<Vec<_>>()
                )
            })
            .id
    }

    fn edge(g: &FlowGraph, src: NodeId, dst: NodeId) -> Option<String> {
        g.cfg
            .iter()
            .find(|e| e.src == src && e.dst == dst)
            .map(|e| e.kind.to_string())
    }

    fn vars(names: &[&str]) -> BTreeSet<Variable> {
        names.iter().map(|n| Variable::new(*n)).collect()
    }

    #[test]
    fn empty_body_is_entry_to_exit() {
        let g = build("void m() { }", "m");
        assert_eq!(g.statement_count(), 0);
        assert_eq!(
            g.cfg,
            vec![CfgEdge {
                src: g.entry,
                dst: g.exit,
                kind: EdgeKind::SEQ
            }]
        );
    }

    #[test]
    fn missing_method() {
        let p = parse_source("void m() { }").unwrap();
        assert_eq!(
            build_cfg(&p, "n"),
            Err(BuildError::NoSuchMethod("n".into()))
        );
    }

    #[test]
    fn return_value_is_node_plus_jump_edge() {
        let g = build("int f(a) { if (a < 0) { return; } return a + 1; }", "f");
        let p = find(&g, "if (a < 0)");
        assert_eq!(edge(&g, p, g.exit).as_deref(), Some("true+jump-return"));
        let r = find(&g, "return a + 1");
        assert_eq!(g.node(r).defs, vars(&["<ret>"]));
        assert_eq!(edge(&g, p, r).as_deref(), Some("false"));
        assert_eq!(edge(&g, r, g.exit).as_deref(), Some("jump-return"));
    }

    #[test]
    fn switch_fallthrough_and_break() {
        let g = build(
            "void m(c) { switch (c) { case 'x': { v = 1; } default: { v = 2; break; } } w = v; }",
            "m",
        );
        let sw = find(&g, "switch (c)");
        let one = find(&g, "v = 1");
        let two = find(&g, "v = 2");
        let w = find(&g, "w = v");
        assert_eq!(edge(&g, sw, one).as_deref(), Some("case"));
        assert_eq!(edge(&g, sw, two).as_deref(), Some("false"));
        assert_eq!(edge(&g, one, two).as_deref(), Some("fallthrough"));
        assert_eq!(edge(&g, two, w).as_deref(), Some("jump-break"));
    }

    #[test]
    fn switch_without_default_exits_on_false() {
        let g = build(
            "void m(c) { switch (c) { case 1: v = 1; break; case 2: v = 2; } w = v; }",
            "m",
        );
        let sw = find(&g, "switch (c)");
        let w = find(&g, "w = v");
        assert_eq!(edge(&g, sw, w).as_deref(), Some("false"));
        assert_eq!(
            edge(&g, find(&g, "v = 1"), w).as_deref(),
            Some("jump-break")
        );
        assert_eq!(edge(&g, find(&g, "v = 2"), w).as_deref(), Some("seq"));
    }

    #[test]
    fn loops_continue_and_break() {
        let g = build(
            "void m(n) { for (int i = 0; i < n; i++) { if (i == 3) { continue; } if (i == 5) { break; } s = s + i; } }",
            "m",
        );
        let header = find(&g, "for (i < n)");
        let update = find(&g, "i++");
        let p3 = find(&g, "if (i == 3)");
        let p5 = find(&g, "if (i == 5)");
        assert_eq!(edge(&g, p3, update).as_deref(), Some("true+jump-continue"));
        assert_eq!(edge(&g, p5, g.exit).as_deref(), Some("true+jump-break"));
        assert_eq!(
            edge(&g, find(&g, "s = s + i"), update).as_deref(),
            Some("seq")
        );
        assert_eq!(edge(&g, update, header).as_deref(), Some("seq"));
        assert_eq!(edge(&g, header, g.exit).as_deref(), Some("false"));
    }

    #[test]
    fn calls_are_hoisted_with_ret() {
        let src =
            "void f(a, b) { } void m(x) { y = g(h(x)); f(x, y); o.run(y); Integer.parseInt(s); }";
        let g = build(src, "m");
        let h = find(&g, "h(x)");
        let gn = find(&g, "g(h(x))");
        let y = find(&g, "y = g(h(x))");
        assert_eq!(g.node(h).defs, vars(&["<ret>"]));
        assert_eq!(g.node(gn).uses, vars(&["<ret>"]));
        assert_eq!(g.node(y).uses, vars(&["<ret>"]));
        assert_eq!(edge(&g, h, gn).as_deref(), Some("call"));
        let f = find(&g, "f(x, y)");
        assert_eq!(g.node(f).kind, NodeKind::CallParam);
        assert_eq!(g.node(f).defs, vars(&["f::a", "f::b"]));
        assert_eq!(g.node(f).uses, vars(&["x", "y"]));
        assert_eq!(g.node(find(&g, "o.run(y)")).uses, vars(&["o", "y"]));
        assert_eq!(g.node(find(&g, "Integer.parseInt(s)")).uses, vars(&["s"]));
    }

    #[test]
    fn condition_calls_precede_the_predicate_and_loop_back_to_them() {
        let g = build(
            "void m(it) { while (it.hasNext()) { x = it.next(); } }",
            "m",
        );
        let call = find(&g, "it.hasNext()");
        let p = find(&g, "while (it.hasNext())");
        assert_eq!(edge(&g, call, p).as_deref(), Some("call"));
        assert!(g.node(p).defs.is_empty());
        assert_eq!(g.node(p).uses, vars(&["<ret>"]));
        assert_eq!(
            edge(&g, find(&g, "x = it.next()"), call).as_deref(),
            Some("seq")
        );
    }

    #[test]
    fn variables_for_fields_and_arrays() {
        let g = build(
            "void m(r) { swap[r] = r; this.runningState = STATE; x = c.length; a.b += 1; k = Token.BLOCK; z = m[i][j]; }",
            "m",
        );
        let n = g.node(find(&g, "swap[r] = r"));
        assert_eq!(
            (n.defs.clone(), n.uses.clone()),
            (vars(&["swap[]"]), vars(&["r"]))
        );
        assert_eq!(
            g.node(find(&g, "this.runningState = STATE")).defs,
            vars(&["this.runningState"])
        );
        assert_eq!(
            g.node(find(&g, "x = c.length")).uses,
            vars(&["c", "c.length"])
        );
        assert_eq!(g.node(find(&g, "a.b += 1")).uses, vars(&["a", "a.b"]));
        assert_eq!(
            g.node(find(&g, "k = Token.BLOCK")).uses,
            vars(&["Token.BLOCK"])
        );
        assert_eq!(
            g.node(find(&g, "z = m[i][j]")).uses,
            vars(&["i", "j", "m[]"])
        );
    }

    #[test]
    fn unreachable_code_is_rejected() {
        let p = parse_source("void m() { return; x = 1; }").unwrap();
        assert_eq!(build_cfg(&p, "m"), Err(BuildError::Unreachable { line: 1 }));
    }

    #[test]
    fn throw_defines_exc() {
        let g = build("void m(k) { throw new E(\"bad\" + k); }", "m");
        let t = find(&g, "throw new E(\"bad\" + k)");
        assert_eq!(g.node(t).defs, vars(&["<exc>"]));
        assert_eq!(g.node(t).uses, vars(&["k"]));
        assert_eq!(edge(&g, t, g.exit).as_deref(), Some("jump-throw"));
        assert!(g.is_jump_value(t));
    }
}
