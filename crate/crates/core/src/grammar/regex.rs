use std::fmt;

/// A string regular expression over letters of type `L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex<L> {
    /// The empty language.
    Empty,
    /// The language `{ε}`.
    Epsilon,
    Atom(L),
    Concat(Vec<Regex<L>>),
    Union(Vec<Regex<L>>),
    Star(Box<Regex<L>>),
}

impl<L: Clone + PartialEq> Regex<L> {
    pub fn atom(l: L) -> Self {
        Regex::Atom(l)
    }

    /// Concatenation with `∅` absorbing and `ε` dropped.
    pub fn concat(parts: impl IntoIterator<Item = Regex<L>>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Regex::Empty => return Regex::Empty,
                Regex::Epsilon => {}
                Regex::Concat(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Regex::Epsilon,
            1 => out.pop().unwrap(),
            _ => Regex::Concat(out),
        }
    }

    /// Union with `∅` dropped and duplicate branches removed.
    pub fn union(parts: impl IntoIterator<Item = Regex<L>>) -> Self {
        let mut out: Vec<Regex<L>> = Vec::new();
        for p in parts {
            let branches = match p {
                Regex::Empty => continue,
                Regex::Union(inner) => inner,
                other => vec![other],
            };
            for b in branches {
                if !out.contains(&b) {
                    out.push(b);
                }
            }
        }
        match out.len() {
            0 => Regex::Empty,
            1 => out.pop().unwrap(),
            _ => Regex::Union(out),
        }
    }

    pub fn star(r: Regex<L>) -> Self {
        match r {
            Regex::Empty | Regex::Epsilon => Regex::Epsilon,
            s @ Regex::Star(_) => s,
            other => Regex::Star(Box::new(other)),
        }
    }

    /// True if the language contains the empty word.
    pub fn nullable(&self) -> bool {
        match self {
            Regex::Empty | Regex::Atom(_) => false,
            Regex::Epsilon | Regex::Star(_) => true,
            Regex::Concat(ps) => ps.iter().all(Regex::nullable),
            Regex::Union(ps) => ps.iter().any(Regex::nullable),
        }
    }

    /// Leaves in left-to-right order.
    pub fn atoms(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Atom(l) => out.push(l),
            Regex::Concat(ps) | Regex::Union(ps) => ps.iter().for_each(|p| p.collect_atoms(out)),
            Regex::Star(r) => r.collect_atoms(out),
        }
    }

    pub fn map<M: Clone + PartialEq>(&self, f: &impl Fn(&L) -> M) -> Regex<M> {
        match self {
            Regex::Empty => Regex::Empty,
            Regex::Epsilon => Regex::Epsilon,
            Regex::Atom(l) => Regex::Atom(f(l)),
            Regex::Concat(ps) => Regex::Concat(ps.iter().map(|p| p.map(f)).collect()),
            Regex::Union(ps) => Regex::Union(ps.iter().map(|p| p.map(f)).collect()),
            Regex::Star(r) => Regex::Star(Box::new(r.map(f))),
        }
    }
}

impl<L: fmt::Display> Regex<L> {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // 0: union context, 1: concatenation operand, 2: star operand
        let (own, open) = match self {
            Regex::Union(_) => (0, prec > 0),
            Regex::Concat(_) => (1, prec > 1),
            _ => (2, false),
        };
        if open {
            f.write_str("(")?;
        }
        match self {
            Regex::Empty => f.write_str("∅")?,
            Regex::Epsilon => f.write_str("eps")?,
            Regex::Atom(l) => write!(f, "{l}")?,
            Regex::Concat(ps) | Regex::Union(ps) => {
                let sep = if own == 0 { " | " } else { " " };
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    p.fmt_prec(f, own + 1)?;
                }
            }
            Regex::Star(r) => {
                r.fmt_prec(f, 2)?;
                f.write_str("*")?;
            }
        }
        if open {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl<L: fmt::Display> fmt::Display for Regex<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
