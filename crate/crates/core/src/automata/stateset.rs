use super::StateId;

/// A dense set of states backed by 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StateSet {
    words: Vec<u64>,
}

impl StateSet {
    pub fn with_capacity(states: usize) -> Self {
        Self {
            words: vec![0; states.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, q: StateId) {
        let i = q.index();
        if i / 64 >= self.words.len() {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, q: StateId) -> bool {
        let i = q.index();
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(StateId::from_index(wi * 64 + b))
            })
        })
    }
}

impl FromIterator<StateId> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        let mut s = StateSet::default();
        for q in iter {
            s.insert(q);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_iterate() {
        let mut s = StateSet::with_capacity(3);
        for i in [0usize, 5, 64, 130] {
            s.insert(StateId::from_index(i));
        }
        assert!(s.contains(StateId::from_index(64)));
        assert!(!s.contains(StateId::from_index(63)));
        assert!(!s.contains(StateId::from_index(1000)));
        let got: Vec<usize> = s.iter().map(StateId::index).collect();
        assert_eq!(got, vec![0, 5, 64, 130]);
        assert!(StateSet::default().is_empty());
    }
}
