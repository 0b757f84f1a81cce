use std::collections::BTreeMap;
use std::ops::Deref;

use super::{AutomatonError, Flavour, Fsta, StateId};

/// An automaton whose rules, initial and final states never use alphabet
/// symbols as states.
#[derive(Debug, Clone)]
pub struct PureFsta(Fsta);

impl PureFsta {
    pub fn into_inner(self) -> Fsta {
        self.0
    }
}

impl Deref for PureFsta {
    type Target = Fsta;

    fn deref(&self) -> &Fsta {
        &self.0
    }
}

impl TryFrom<Fsta> for PureFsta {
    type Error = AutomatonError;

    fn try_from(a: Fsta) -> Result<Self, Self::Error> {
        match a.impurity() {
            None => Ok(PureFsta(a)),
            Some(reason) => Err(AutomatonError::ImpureInput { reason }),
        }
    }
}

/// Rewrites `a` so that no symbol acts as a state. Every symbol `s` that is
/// used as a state gets a duplicate state `~s`; each rule `(q, r) -> p`
/// becomes `(q̄, r) -> p̄`, plus `(q̄, r̄) -> p̄` when `r` is a symbol.
/// The flavour and the accepted language are unchanged.
pub fn to_pure_states(a: &Fsta) -> PureFsta {
    if a.has_pure_states() {
        return PureFsta(a.clone());
    }
    let mut b = a.to_builder();
    b.clear_initials();
    b.set_finals(Default::default());
    b.hrules.clear();
    b.vrules.clear();

    let mut twins: BTreeMap<StateId, StateId> = BTreeMap::new();
    let mut bar = |b: &mut super::FstaBuilder, q: StateId| -> StateId {
        if !a.is_symbol(q) {
            return q;
        }
        *twins.entry(q).or_insert_with(|| {
            let name = format!("~{}", a.label(q));
            b.fresh_state(&name)
        })
    };

    for &q in a.initials() {
        let q = bar(&mut b, q);
        b.initial(q);
    }
    for &q in a.finals() {
        let q = bar(&mut b, q);
        b.final_state(q);
    }
    for &(q, r, p) in a.hrules() {
        let (qb, pb) = (bar(&mut b, q), bar(&mut b, p));
        b.hrule(qb, r, pb);
        if a.is_symbol(r) {
            let rb = bar(&mut b, r);
            b.hrule(qb, rb, pb);
        }
    }
    if a.flavour() == Flavour::Generalised {
        for &(q, p) in a.vrules() {
            if a.is_symbol(q) {
                // γ'(q̄) = γ(q)‾ ; γ'(a) = ∅ for symbols
                let (qb, pb) = (bar(&mut b, q), bar(&mut b, p));
                b.vrule(qb, pb);
            } else {
                let pb = bar(&mut b, p);
                b.vrule(q, pb);
            }
        }
    }
    let out = b
        .build()
        .expect("purification keeps the automaton well formed");
    debug_assert!(out.has_pure_states());
    PureFsta(out)
}
