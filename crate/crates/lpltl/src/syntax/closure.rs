use std::collections::HashMap;

use super::Formula;

/// An ordered, duplicate-free collection of formulas with O(1) membership
/// and index lookup. Insertion order is first occurrence.
#[derive(Debug, Clone, Default)]
pub struct ClosureSet {
    items: Vec<Formula>,
    index: HashMap<Formula, usize>,
}

impl ClosureSet {
    pub fn new() -> ClosureSet {
        ClosureSet::default()
    }

    /// Inserts a formula, keeping the first occurrence. Returns its index.
    pub fn insert(&mut self, phi: Formula) -> usize {
        if let Some(&i) = self.index.get(&phi) {
            return i;
        }
        let i = self.items.len();
        self.index.insert(phi.clone(), i);
        self.items.push(phi);
        i
    }

    pub fn contains(&self, phi: &Formula) -> bool {
        self.index.contains_key(phi)
    }

    pub fn index_of(&self, phi: &Formula) -> Option<usize> {
        self.index.get(phi).copied()
    }

    pub fn get(&self, i: usize) -> &Formula {
        &self.items[i]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.items.iter()
    }
}

impl PartialEq for ClosureSet {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items
    }
}

impl Eq for ClosureSet {}

impl<'a> IntoIterator for &'a ClosureSet {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
