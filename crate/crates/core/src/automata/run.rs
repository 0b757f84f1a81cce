//! Acceptance, the move relation over intermediate trees, and run traces.

use std::collections::HashSet;

use super::{AutomatonError, Fsta, StateId, StateLabel, StateSet};
use crate::tree::{Item, StringTree};

/// Entry of an intermediate tree: a state symbol, the slash marking a label
/// that has been started, or a child.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RunItem {
    State(StateId),
    Slash,
    Child(RunTree),
}

/// A tree over states and `/`, as seen in the middle of a run.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RunTree {
    pub items: Vec<RunItem>,
}

impl RunTree {
    pub fn from_tree(a: &Fsta, t: &StringTree) -> Result<RunTree, AutomatonError> {
        let items = t
            .items()
            .iter()
            .map(|item| match item {
                Item::Symbol(c) => a
                    .symbol_state(*c)
                    .map(RunItem::State)
                    .ok_or(AutomatonError::AlphabetMismatch { symbol: *c }),
                Item::Child(child) => RunTree::from_tree(a, child).map(RunItem::Child),
            })
            .collect::<Result<_, _>>()?;
        Ok(RunTree { items })
    }

    fn has_children(&self) -> bool {
        self.items.iter().any(|i| matches!(i, RunItem::Child(_)))
    }

    /// `Some(q)` when this node is exactly `<q/>`.
    pub fn finished_state(&self) -> Option<StateId> {
        match self.items.as_slice() {
            [RunItem::State(q), RunItem::Slash] => Some(*q),
            _ => None,
        }
    }

    /// Text form using the automaton's state names; multi-character names
    /// are wrapped in braces.
    pub fn render(&self, a: &Fsta) -> String {
        let mut out = String::from("<");
        for item in &self.items {
            match item {
                RunItem::State(q) => out.push_str(&render_state(a, *q)),
                RunItem::Slash => out.push('/'),
                RunItem::Child(c) => out.push_str(&c.render(a)),
            }
        }
        out.push('>');
        out
    }
}

fn render_state(a: &Fsta, q: StateId) -> String {
    match a.label(q) {
        StateLabel::Symbol(c) if matches!(c, '<' | '>' | '/' | '\\' | '{' | '}') => {
            format!("\\{c}")
        }
        StateLabel::Symbol(c) => c.to_string(),
        StateLabel::Named(n) => format!("{{{n}}}"),
    }
}

/// One move and the rule behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Initial {
        state: StateId,
    },
    Horizontal {
        from: StateId,
        read: StateId,
        to: StateId,
    },
    Vertical {
        from: StateId,
        to: StateId,
    },
}

impl StepKind {
    pub fn render(&self, a: &Fsta) -> String {
        let s = |q: StateId| a.label(q).to_string();
        match *self {
            StepKind::Initial { state } => format!("initial {}", s(state)),
            StepKind::Horizontal { from, read, to } => {
                format!("horizontal ({}, {}) -> {}", s(from), s(read), s(to))
            }
            StepKind::Vertical { from, to } => format!("vertical {} -> {}", s(from), s(to)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub tree: RunTree,
}

/// A successful run: the input followed by every intermediate tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub start: RunTree,
    pub steps: Vec<TraceStep>,
}

impl RunTrace {
    pub fn last(&self) -> &RunTree {
        self.steps.last().map_or(&self.start, |s| &s.tree)
    }
}

fn check_alphabet(a: &Fsta, t: &StringTree) -> Result<(), AutomatonError> {
    match t.symbols().into_iter().find(|c| !a.alphabet().contains(c)) {
        Some(symbol) => Err(AutomatonError::AlphabetMismatch { symbol }),
        None => Ok(()),
    }
}

/// Decides acceptance by processing leaves left to right while tracking
/// the set of states every node may finish in.
pub fn run_accept(a: &Fsta, t: &StringTree) -> Result<bool, AutomatonError> {
    check_alphabet(a, t)?;
    let end = end_states(a, t);
    let accepted = end.iter().any(|q| a.is_final(q));
    Ok(accepted)
}

fn initial_set(a: &Fsta) -> StateSet {
    let mut s = StateSet::with_capacity(a.state_count());
    for &q in a.initials() {
        s.insert(q);
    }
    s
}

fn advance(a: &Fsta, current: &StateSet, letters: &StateSet) -> StateSet {
    let mut next = StateSet::with_capacity(a.state_count());
    for p in current.iter() {
        for b in letters.iter() {
            for &c in a.step(p, b) {
                next.insert(c);
            }
        }
    }
    next
}

fn letters_of(a: &Fsta, item: &Item) -> StateSet {
    let mut letters = StateSet::with_capacity(a.state_count());
    match item {
        Item::Symbol(c) => letters.insert(a.symbol_state(*c).expect("alphabet checked")),
        Item::Child(child) => {
            for q in end_states(a, child).iter() {
                for &b in a.vertical(q) {
                    letters.insert(b);
                }
            }
        }
    }
    letters
}

fn end_states(a: &Fsta, t: &StringTree) -> StateSet {
    let mut current = initial_set(a);
    for item in t.items() {
        if current.is_empty() {
            break;
        }
        let letters = letters_of(a, item);
        current = advance(a, &current, &letters);
    }
    current
}

enum Change {
    Node(RunTree),
    Fold(StateId),
}

fn node_moves(
    a: &Fsta,
    node: &RunTree,
    leftmost: bool,
    stop: &mut bool,
    out: &mut Vec<(StepKind, Change)>,
) {
    if node.has_children() {
        for (i, item) in node.items.iter().enumerate() {
            if *stop {
                return;
            }
            let RunItem::Child(child) = item else {
                continue;
            };
            let mut inner = Vec::new();
            node_moves(a, child, leftmost, stop, &mut inner);
            for (kind, change) in inner {
                let mut items = node.items.clone();
                items[i] = match change {
                    Change::Node(n) => RunItem::Child(n),
                    Change::Fold(q) => RunItem::State(q),
                };
                out.push((kind, Change::Node(RunTree { items })));
            }
        }
        return;
    }
    *stop = leftmost;
    match node.items.as_slice() {
        [RunItem::State(p), RunItem::Slash, rest @ ..] => match rest.split_first() {
            Some((RunItem::State(b), tail)) => {
                for &c in a.step(*p, *b) {
                    let mut items = vec![RunItem::State(c), RunItem::Slash];
                    items.extend(tail.iter().cloned());
                    out.push((
                        StepKind::Horizontal {
                            from: *p,
                            read: *b,
                            to: c,
                        },
                        Change::Node(RunTree { items }),
                    ));
                }
            }
            Some(_) => unreachable!("a started label holds only states"),
            None => {
                for &b in a.vertical(*p) {
                    out.push((StepKind::Vertical { from: *p, to: b }, Change::Fold(b)));
                }
            }
        },
        items => {
            debug_assert!(items.iter().all(|i| matches!(i, RunItem::State(_))));
            for &q in a.initials() {
                let mut next = vec![RunItem::State(q), RunItem::Slash];
                next.extend(items.iter().cloned());
                out.push((
                    StepKind::Initial { state: q },
                    Change::Node(RunTree { items: next }),
                ));
            }
        }
    }
}

/// Every tree reachable from `tree` in one move. The root never folds.
pub fn successors(a: &Fsta, tree: &RunTree) -> Vec<(StepKind, RunTree)> {
    collect_successors(a, tree, false)
}

fn collect_successors(a: &Fsta, tree: &RunTree, leftmost: bool) -> Vec<(StepKind, RunTree)> {
    let mut out = Vec::new();
    let mut stop = false;
    node_moves(a, tree, leftmost, &mut stop, &mut out);
    out.into_iter()
        .filter_map(|(kind, change)| match change {
            Change::Node(n) => Some((kind, n)),
            Change::Fold(_) => None,
        })
        .collect()
}

fn search(a: &Fsta, t: &StringTree, leftmost: bool) -> Result<bool, AutomatonError> {
    check_alphabet(a, t)?;
    let start = RunTree::from_tree(a, t)?;
    let mut seen: HashSet<RunTree> = HashSet::new();
    let mut stack = vec![start];
    while let Some(tree) = stack.pop() {
        if tree.finished_state().is_some_and(|q| a.is_final(q)) {
            return Ok(true);
        }
        for (_, next) in collect_successors(a, &tree, leftmost) {
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    Ok(false)
}

/// Exhaustive search over every interleaving of leaf choices and rule
/// choices allowed by the move relation.
pub fn brute_force_accept(a: &Fsta, t: &StringTree) -> Result<bool, AutomatonError> {
    search(a, t, false)
}

/// Like [`brute_force_accept`], but every move is applied to the leftmost
/// leaf; rule choices are still explored exhaustively.
pub fn brute_force_accept_leftmost(a: &Fsta, t: &StringTree) -> Result<bool, AutomatonError> {
    search(a, t, true)
}

/// Number of moves in any complete run over `t`: one initial assignment
/// per label, one horizontal move per item, one vertical move per
/// non-root label.
pub fn trace_length(t: &StringTree) -> usize {
    fn walk(t: &StringTree) -> usize {
        1 + t.items().len() + t.children().map(|c| walk(c) + 1).sum::<usize>()
    }
    walk(t)
}

struct NodeInfo {
    forward: Vec<StateSet>,
    letters: Vec<StateSet>,
    children: Vec<Option<NodeInfo>>,
}

fn analyze(a: &Fsta, t: &StringTree) -> NodeInfo {
    let mut forward = vec![initial_set(a)];
    let mut letters = Vec::new();
    let mut children = Vec::new();
    for item in t.items() {
        let (l, info) = match item {
            Item::Symbol(c) => {
                let mut l = StateSet::default();
                l.insert(a.symbol_state(*c).expect("alphabet checked"));
                (l, None)
            }
            Item::Child(child) => {
                let info = analyze(a, child);
                let mut l = StateSet::default();
                for q in info.forward.last().unwrap().iter() {
                    for &b in a.vertical(q) {
                        l.insert(b);
                    }
                }
                (l, Some(info))
            }
        };
        let next = advance(a, forward.last().unwrap(), &l);
        forward.push(next);
        letters.push(l);
        children.push(info);
    }
    NodeInfo {
        forward,
        letters,
        children,
    }
}

struct NodePlan {
    initial: StateId,
    // (read, to) per item
    moves: Vec<(StateId, StateId)>,
    // (item index, plan, state the child finishes in)
    children: Vec<(usize, NodePlan, StateId)>,
}

fn plan(a: &Fsta, info: &NodeInfo, end: StateId) -> NodePlan {
    let n = info.letters.len();
    let mut moves = vec![(end, end); n];
    let mut children = Vec::new();
    let mut target = end;
    for i in (0..n).rev() {
        let (p, b) = info.forward[i]
            .iter()
            .flat_map(|p| info.letters[i].iter().map(move |b| (p, b)))
            .find(|&(p, b)| a.step(p, b).contains(&target))
            .expect("forward sets admit a predecessor");
        moves[i] = (b, target);
        if let Some(child) = &info.children[i] {
            let child_end = child
                .forward
                .last()
                .unwrap()
                .iter()
                .find(|&q| a.vertical(q).contains(&b))
                .expect("letter came from the child");
            children.push((i, plan(a, child, child_end), child_end));
        }
        target = p;
    }
    children.reverse();
    NodePlan {
        initial: target,
        moves,
        children,
    }
}

fn node_at<'t>(tree: &'t mut RunTree, path: &[usize]) -> &'t mut RunTree {
    path.iter().fold(tree, |node, &i| match &mut node.items[i] {
        RunItem::Child(c) => c,
        _ => unreachable!("path leads through children"),
    })
}

fn emit(plan: &NodePlan, path: &mut Vec<usize>, tree: &mut RunTree, steps: &mut Vec<TraceStep>) {
    for (i, child, child_end) in &plan.children {
        path.push(*i);
        emit(child, path, tree, steps);
        path.pop();
        let passed = plan.moves[*i].0;
        node_at(tree, path).items[*i] = RunItem::State(passed);
        steps.push(TraceStep {
            kind: StepKind::Vertical {
                from: *child_end,
                to: passed,
            },
            tree: tree.clone(),
        });
    }
    let node = node_at(tree, path);
    node.items
        .splice(0..0, [RunItem::State(plan.initial), RunItem::Slash]);
    steps.push(TraceStep {
        kind: StepKind::Initial {
            state: plan.initial,
        },
        tree: tree.clone(),
    });
    let mut from = plan.initial;
    for &(read, to) in &plan.moves {
        let node = node_at(tree, path);
        node.items.remove(2);
        node.items[0] = RunItem::State(to);
        steps.push(TraceStep {
            kind: StepKind::Horizontal { from, read, to },
            tree: tree.clone(),
        });
        from = to;
    }
}

/// One successful run, leaves processed leftmost first. `Ok(None)` means
/// the tree is rejected; a run longer than `limit` moves is reported as
/// [`AutomatonError::BudgetExceeded`].
pub fn trace_run(
    a: &Fsta,
    t: &StringTree,
    limit: usize,
) -> Result<Option<RunTrace>, AutomatonError> {
    check_alphabet(a, t)?;
    let needed = trace_length(t);
    if needed > limit {
        return Err(AutomatonError::BudgetExceeded { needed, limit });
    }
    let info = analyze(a, t);
    let Some(end) = info.forward.last().unwrap().iter().find(|&q| a.is_final(q)) else {
        return Ok(None);
    };
    let root_plan = plan(a, &info, end);
    let start = RunTree::from_tree(a, t)?;
    let mut tree = start.clone();
    let mut steps = Vec::with_capacity(needed);
    emit(&root_plan, &mut Vec::new(), &mut tree, &mut steps);
    Ok(Some(RunTrace { start, steps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::example_single_letter;
    use crate::tree::parse_tree;

    fn t(s: &str) -> StringTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn example_verdicts() {
        let a = example_single_letter();
        for (tree, expected) in [
            ("<<<a>>a<aa>>", true),
            ("<ab>", false),
            ("<>", true),
            ("<a<b>>", false),
            ("<b<bb><>>", false),
            ("<b<bb>>", true),
        ] {
            assert_eq!(run_accept(&a, &t(tree)).unwrap(), expected, "{tree}");
            assert_eq!(
                brute_force_accept(&a, &t(tree)).unwrap(),
                expected,
                "{tree}"
            );
            assert_eq!(
                brute_force_accept_leftmost(&a, &t(tree)).unwrap(),
                expected,
                "{tree}"
            );
        }
    }

    #[test]
    fn alphabet_mismatch() {
        let a = example_single_letter();
        assert_eq!(
            run_accept(&a, &t("<ac>")),
            Err(AutomatonError::AlphabetMismatch { symbol: 'c' })
        );
        assert!(brute_force_accept(&a, &t("<c>")).is_err());
    }

    #[test]
    fn trace_of_example_tree() {
        let a = example_single_letter();
        let tree = t("<<<a>>a<aa>>");
        let trace = trace_run(&a, &tree, 100).unwrap().unwrap();
        assert_eq!(trace.last().render(&a), "<a/>");
        assert_eq!(trace.steps.len(), trace_length(&tree));
        let mut prev = trace.start.clone();
        for step in &trace.steps {
            let next = successors(&a, &prev);
            assert!(next.iter().any(|(k, n)| *k == step.kind && *n == step.tree));
            prev = step.tree.clone();
        }
    }

    #[test]
    fn trace_rejection_and_budget() {
        let a = example_single_letter();
        assert_eq!(trace_run(&a, &t("<ab>"), 100).unwrap(), None);
        assert!(matches!(
            trace_run(&a, &t("<a>"), 0),
            Err(AutomatonError::BudgetExceeded {
                needed: 2,
                limit: 0
            })
        ));
        let empty = trace_run(&a, &t("<>"), 1).unwrap().unwrap();
        assert_eq!(empty.last().render(&a), "<{q0}/>");
    }

    #[test]
    fn trace_length_counts_moves() {
        // <<a>>: root init + 1 item, child init + 1 item, 1 vertical
        assert_eq!(trace_length(&t("<<a>>")), 5);
        assert_eq!(trace_length(&t("<>")), 1);
    }
}
