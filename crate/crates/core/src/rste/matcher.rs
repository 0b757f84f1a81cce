//! Whole-tree matching with captures.
//!
//! Each nonterminal body runs as a Pike-style virtual machine over the
//! item sequence of one node. Threads are kept in priority order (earlier
//! union branches first, iterations greedy) and a program counter reached
//! twice keeps only its higher-priority thread, so the surviving match is
//! the preferred derivation. A child item is matched by recursively running
//! the child's nonterminal; those results are memoized per child.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::compile::{Compiled, Node};
use super::Binding;
use crate::tree::{Item, StringTree, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Inst {
    Sym(Symbol),
    AnySym,
    Child(usize),
    /// Try the first target before the second.
    Split(usize, usize),
    Jmp(usize),
    Open(usize),
    Close(usize),
    Fail,
    Match,
}

fn emit(n: &Node, prog: &mut Vec<Inst>) {
    match n {
        Node::Fail => prog.push(Inst::Fail),
        Node::Eps => {}
        Node::Sym(c) => prog.push(Inst::Sym(*c)),
        Node::AnySym => prog.push(Inst::AnySym),
        Node::Child(k) => prog.push(Inst::Child(*k)),
        Node::Cat(ps) => ps.iter().for_each(|p| emit(p, prog)),
        Node::Alt(ps) => {
            let mut exits = Vec::new();
            for (i, p) in ps.iter().enumerate() {
                if i + 1 == ps.len() {
                    emit(p, prog);
                } else {
                    let split = prog.len();
                    prog.push(Inst::Split(split + 1, 0));
                    emit(p, prog);
                    exits.push(prog.len());
                    prog.push(Inst::Jmp(0));
                    prog[split] = Inst::Split(split + 1, prog.len());
                }
            }
            let end = prog.len();
            for e in exits {
                prog[e] = Inst::Jmp(end);
            }
        }
        Node::Star(p) => {
            let split = prog.len();
            prog.push(Inst::Split(split + 1, 0));
            emit(p, prog);
            prog.push(Inst::Jmp(split));
            prog[split] = Inst::Split(split + 1, prog.len());
        }
        Node::Group(g, p) => {
            prog.push(Inst::Open(*g));
            emit(p, prog);
            prog.push(Inst::Close(*g));
        }
    }
}

fn program(n: &Node) -> Rc<[Inst]> {
    let mut prog = Vec::new();
    emit(n, &mut prog);
    prog.push(Inst::Match);
    prog.into()
}

type Bound = BTreeMap<usize, Binding>;

#[derive(Debug, Clone)]
struct Thread {
    pc: usize,
    open: Vec<usize>,
    bound: Bound,
}

struct Machine<'a> {
    /// Nonterminal programs followed by the root program.
    programs: Vec<Rc<[Inst]>>,
    many: &'a [bool],
    memo: HashMap<(usize, *const StringTree), Option<Bound>>,
}

fn record(bound: &mut Bound, many: &[bool], g: usize, fragment: StringTree) {
    if many.get(g).copied().unwrap_or(false) {
        match bound.entry(g).or_insert_with(|| Binding::Many(Vec::new())) {
            Binding::Many(v) => v.push(fragment),
            Binding::One(_) => unreachable!("group kinds are fixed"),
        }
    } else {
        bound.entry(g).or_insert(Binding::One(fragment));
    }
}

impl Machine<'_> {
    #[allow(clippy::too_many_arguments)]
    fn add(
        &self,
        prog: &[Inst],
        list: &mut Vec<Thread>,
        seen: &mut [bool],
        mut t: Thread,
        items: &[Item],
        pos: usize,
    ) {
        if seen[t.pc] {
            return;
        }
        seen[t.pc] = true;
        match prog[t.pc] {
            Inst::Jmp(to) => {
                t.pc = to;
                self.add(prog, list, seen, t, items, pos);
            }
            Inst::Split(a, b) => {
                let mut second = t.clone();
                second.pc = b;
                t.pc = a;
                self.add(prog, list, seen, t, items, pos);
                self.add(prog, list, seen, second, items, pos);
            }
            Inst::Open(g) => {
                if t.open.len() <= g {
                    t.open.resize(g + 1, usize::MAX);
                }
                t.open[g] = pos;
                t.pc += 1;
                self.add(prog, list, seen, t, items, pos);
            }
            Inst::Close(g) => {
                let start = t.open[g];
                let fragment = StringTree::from_items(items[start..pos].to_vec());
                record(&mut t.bound, self.many, g, fragment);
                t.pc += 1;
                self.add(prog, list, seen, t, items, pos);
            }
            Inst::Fail => {}
            Inst::Sym(_) | Inst::AnySym | Inst::Child(_) | Inst::Match => list.push(t),
        }
    }

    fn run(&mut self, id: usize, node: &StringTree) -> Option<Bound> {
        let key = (id, node as *const StringTree);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let result = self.execute(id, node);
        self.memo.insert(key, result.clone());
        result
    }

    fn execute(&mut self, id: usize, node: &StringTree) -> Option<Bound> {
        let prog = Rc::clone(&self.programs[id]);
        let items = node.items();
        let mut seen = vec![false; prog.len()];
        let mut current = Vec::new();
        let start = Thread {
            pc: 0,
            open: Vec::new(),
            bound: Bound::new(),
        };
        self.add(&prog, &mut current, &mut seen, start, items, 0);
        for (i, item) in items.iter().enumerate() {
            let mut next = Vec::new();
            seen.fill(false);
            for mut t in current {
                let advance = match (prog[t.pc], item) {
                    (Inst::Sym(c), Item::Symbol(s)) => c == *s,
                    (Inst::AnySym, Item::Symbol(_)) => true,
                    (Inst::Child(k), Item::Child(child)) => match self.run(k, child) {
                        Some(inner) => {
                            for (g, b) in inner {
                                for f in b.fragments() {
                                    record(&mut t.bound, self.many, g, f.clone());
                                }
                            }
                            true
                        }
                        None => false,
                    },
                    _ => false,
                };
                if advance {
                    t.pc += 1;
                    self.add(&prog, &mut next, &mut seen, t, items, i + 1);
                }
            }
            if next.is_empty() {
                return None;
            }
            current = next;
        }
        current
            .into_iter()
            .find(|t| prog[t.pc] == Inst::Match)
            .map(|t| t.bound)
    }
}

/// Matches `t` against the compiled expression.
pub(crate) fn run(c: &Compiled, t: &StringTree) -> Option<Bound> {
    let mut programs: Vec<Rc<[Inst]>> = c.nonterminals.iter().map(program).collect();
    programs.push(program(&c.root));
    let root = programs.len() - 1;
    let mut m = Machine {
        programs,
        many: &c.many,
        memo: HashMap::new(),
    };
    m.execute(root, t)
}

#[cfg(test)]
mod tests {
    use crate::rste::{parse_rste, Binding};
    use crate::tree::{parse_tree, StringTree};

    fn t(s: &str) -> StringTree {
        parse_tree(s).unwrap()
    }

    #[test]
    fn selects_the_middle_subtree() {
        let p = parse_rste("vars: X Z\n(?:%|X|Z)**{Z} .{X} (@ <left <@>*> <(@)> <right <@>*> @)")
            .unwrap();
        let b = p
            .match_tree(&t("<r<<left><m><right>>>"))
            .unwrap()
            .expect("matches");
        assert_eq!(b.groups[&2], Binding::One(t("<m>")));
        assert_eq!(b.groups[&1], Binding::One(t("<<left><m><right>>")));
    }

    #[test]
    fn any_tree_matches_without_bindings() {
        let p = parse_rste("@").unwrap();
        for s in ["<>", "<a<b<>>c>", "<<<>>>"] {
            let b = p.match_tree(&t(s)).unwrap().expect("matches");
            assert!(b.groups.is_empty());
        }
    }

    #[test]
    fn group_under_star_binds_a_sequence() {
        let p = parse_rste("(%)*").unwrap();
        let b = p.match_tree(&t("<abc>")).unwrap().unwrap();
        assert_eq!(
            b.groups[&1],
            Binding::Many(vec![t("<a>"), t("<b>"), t("<c>")])
        );
    }

    #[test]
    fn union_prefers_the_first_branch_and_stars_are_greedy() {
        let p = parse_rste("(a*)(a*)").unwrap();
        let b = p.match_tree(&t("<aaa>")).unwrap().unwrap();
        assert_eq!(b.groups[&1], Binding::One(t("<aaa>")));
        assert_eq!(b.groups[&2], Binding::One(t("<>")));
        let p = parse_rste("(a)|(%)").unwrap();
        let b = p.match_tree(&t("<a>")).unwrap().unwrap();
        assert!(b.groups.contains_key(&1) && !b.groups.contains_key(&2));
    }

    #[test]
    fn rejects_and_refuses_variables() {
        let p = parse_rste("vars: X\na*").unwrap();
        assert!(p.match_tree(&t("<ab>")).unwrap().is_none());
        assert!(p.match_tree(&t("<aX>")).is_err());
    }
}
