use serde::Serialize;

use super::finite::FiniteGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyClass {
    /// Minimal member index.
    pub representative: usize,
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partition of a group into conjugacy classes, ordered by minimal member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassStructure {
    group_order: usize,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
}

impl ClassStructure {
    pub fn new(group: &FiniteGroup) -> Self {
        let order = group.order();
        let mut class_of = vec![u32::MAX; order];
        let mut classes = Vec::new();
        for x in group.elements() {
            if class_of[x] != u32::MAX {
                continue;
            }
            let idx = classes.len() as u32;
            let mut members = Vec::new();
            for g in group.elements() {
                let y = group.conjugate(x, g);
                if class_of[y] == u32::MAX {
                    class_of[y] = idx;
                    members.push(y);
                }
            }
            members.sort_unstable();
            classes.push(ConjugacyClass { representative: x, members });
        }
        ClassStructure { group_order: order, classes, class_of }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    #[inline]
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g] as usize
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(ConjugacyClass::size).collect()
    }
}

/// Conjugacy classes of `group`.
pub fn conjugacy_classes(group: &FiniteGroup) -> ClassStructure {
    ClassStructure::new(group)
}
