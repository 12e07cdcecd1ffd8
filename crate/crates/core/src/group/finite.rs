use std::collections::HashMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GroupError;

/// Largest group order handled with an explicit multiplication table.
pub const MAX_ORDER: usize = 10_000;

/// Orders up to this bound get an exhaustive associativity check.
pub const EXHAUSTIVE_CHECK_ORDER: usize = 200;

const ASSOCIATIVITY_SAMPLES: usize = 20_000;
const ASSOCIATIVITY_SEED: u64 = 0x5eed_a55c;

/// A finite group stored as a dense multiplication table over element
/// indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    identity: usize,
}

impl FiniteGroup {
    /// Builds a group from a row-major table, `table[a * order + b] = a·b`.
    ///
    /// The identity and inverses are located from the table; associativity
    /// is checked exhaustively for small orders and by seeded sampling above
    /// [`EXHAUSTIVE_CHECK_ORDER`].
    pub fn from_table(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge { order, max: MAX_ORDER });
        }
        if table.len() != order * order {
            return Err(GroupError::MalformedTable(format!(
                "expected {} entries, found {}",
                order * order,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= order) {
            return Err(GroupError::MalformedTable(format!("entry {bad} out of range")));
        }
        let table: Vec<u16> = table.into_iter().map(|x| x as u16).collect();

        let identity = (0..order)
            .find(|&e| (0..order).all(|g| {
                table[e * order + g] as usize == g && table[g * order + e] as usize == g
            }))
            .ok_or(GroupError::NoIdentity)?;

        let mut inverses = vec![0u16; order];
        for g in 0..order {
            let inv = (0..order)
                .find(|&x| table[g * order + x] as usize == identity)
                .ok_or(GroupError::NoInverse(g))?;
            if table[inv * order + g] as usize != identity {
                return Err(GroupError::NoInverse(g));
            }
            inverses[g] = inv as u16;
        }

        let group = FiniteGroup { order, table, inverses, identity };
        group.check_associativity()?;
        Ok(group)
    }

    /// Builds a group from a closure computing products of indices.
    pub fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge { order, max: MAX_ORDER });
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b));
            }
        }
        Self::from_table(order, table)
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::from_fn(n, |a, b| (a + b) % n)
    }

    pub fn trivial() -> Self {
        FiniteGroup { order: 1, table: vec![0], inverses: vec![0], identity: 0 }
    }

    /// Parses the text format: first line the order, then `order` rows of
    /// space-separated product indices.
    pub fn parse_table(text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let order: usize = lines
            .next()
            .ok_or_else(|| GroupError::MalformedTable("missing order line".into()))?
            .parse()
            .map_err(|e| GroupError::MalformedTable(format!("bad order: {e}")))?;
        let mut table = Vec::with_capacity(order * order);
        for (row, line) in lines.enumerate() {
            let entries: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            let entries =
                entries.map_err(|e| GroupError::MalformedTable(format!("row {row}: {e}")))?;
            if entries.len() != order {
                return Err(GroupError::MalformedTable(format!(
                    "row {row} has {} entries, expected {order}",
                    entries.len()
                )));
            }
            table.extend(entries);
        }
        Self::from_table(order, table)
    }

    fn check_associativity(&self) -> Result<(), GroupError> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> Result<(), GroupError> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                Err(GroupError::NotAssociative(a, b, c))
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_CHECK_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                check(rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n))?;
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Row-major multiplication table in the text format accepted by
    /// [`FiniteGroup::parse_table`].
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A subgroup recorded by its sorted member indices in a parent group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupData {
    parent_order: usize,
    members: Vec<usize>,
    contains: Vec<bool>,
    is_normal: bool,
}

impl SubgroupData {
    /// Validates closure under products and inverses.
    pub fn new(parent: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self, GroupError> {
        let mut contains = vec![false; parent.order()];
        for m in members {
            if m >= parent.order() {
                return Err(GroupError::NotASubgroup(format!("index {m} out of range")));
            }
            contains[m] = true;
        }
        let members: Vec<usize> = (0..parent.order()).filter(|&g| contains[g]).collect();
        if !contains[parent.identity()] {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for &a in &members {
            if !contains[parent.inv(a)] {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !contains[parent.mul(a, b)] {
                    return Err(GroupError::NotASubgroup(format!("{a}·{b} not a member")));
                }
            }
        }
        let is_normal = parent
            .elements()
            .all(|g| members.iter().all(|&m| contains[parent.conjugate(m, g)]));
        Ok(SubgroupData { parent_order: parent.order(), members, contains, is_normal })
    }

    /// Smallest subgroup containing `generators`.
    pub fn generated_by(parent: &FiniteGroup, generators: &[usize]) -> Result<Self, GroupError> {
        let mut contains = vec![false; parent.order()];
        contains[parent.identity()] = true;
        let mut members = vec![parent.identity()];
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = parent.mul(x, g);
                if !contains[y] {
                    contains[y] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        Self::new(parent, members)
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Self::new(parent, [parent.identity()]).expect("identity subgroup")
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::new(parent, parent.elements()).expect("whole group")
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.contains.get(g).copied().unwrap_or(false)
    }

    pub fn is_normal_in_parent(&self) -> bool {
        self.is_normal
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }
}

/// Left cosets `xS` of a subgroup, each named by its minimal element.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    representatives: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetDecomposition {
    pub fn left(parent: &FiniteGroup, sub: &SubgroupData) -> Self {
        let mut coset_of = vec![usize::MAX; parent.order()];
        let mut representatives = Vec::new();
        for x in parent.elements() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = representatives.len();
            representatives.push(x);
            for &s in sub.members() {
                coset_of[parent.mul(x, s)] = idx;
            }
        }
        CosetDecomposition { representatives, coset_of }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn representative(&self, coset: usize) -> usize {
        self.representatives[coset]
    }

    #[inline]
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }
}

/// Builds a group from permutations closed under composition. Composition is
/// `(a·b)(i) = a(b(i))`.
pub fn group_from_permutations(perms: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let index: HashMap<&[usize], usize> =
        perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    if index.len() != perms.len() {
        return Err(GroupError::MalformedTable("duplicate permutations".into()));
    }
    let mut table = Vec::with_capacity(perms.len() * perms.len());
    let mut buf = Vec::new();
    for a in perms {
        for b in perms {
            buf.clear();
            buf.extend(b.iter().map(|&i| a[i]));
            let idx = index
                .get(buf.as_slice())
                .ok_or_else(|| GroupError::MalformedTable("permutations not closed".into()))?;
            table.push(*idx);
        }
    }
    FiniteGroup::from_table(perms.len(), table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_basics() {
        let c6 = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(c6.identity(), 0);
        assert_eq!(c6.inv(2), 4);
        assert_eq!(c6.element_order(2), 3);
        assert!(c6.is_abelian());
    }

    #[test]
    fn rejects_non_associative_table() {
        // x·y = x − y mod 3 has an identity on one side only
        let err = FiniteGroup::from_fn(3, |a, b| (a + 3 - b) % 3).unwrap_err();
        assert!(matches!(err, GroupError::NoIdentity));
        // a quasigroup with two-sided identity 0 that is not associative
        let t = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(matches!(
            FiniteGroup::from_table(5, t),
            Err(GroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn table_text_round_trip() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let parsed = FiniteGroup::parse_table(&g.to_table_text()).unwrap();
        assert_eq!(g, parsed);
        assert!(FiniteGroup::parse_table("2\n0 1\n").is_err());
    }

    #[test]
    fn subgroup_closure_and_normality() {
        let c6 = FiniteGroup::cyclic(6).unwrap();
        let sub = SubgroupData::generated_by(&c6, &[2]).unwrap();
        assert_eq!(sub.members(), &[0, 2, 4]);
        assert!(sub.is_normal_in_parent());
        assert_eq!(sub.index(), 2);
        assert!(SubgroupData::new(&c6, [0, 1]).is_err());
    }

    #[test]
    fn cosets_use_minimal_representatives() {
        let c6 = FiniteGroup::cyclic(6).unwrap();
        let sub = SubgroupData::generated_by(&c6, &[3]).unwrap();
        let cosets = CosetDecomposition::left(&c6, &sub);
        assert_eq!(cosets.representatives(), &[0, 1, 2]);
        assert_eq!(cosets.coset_of(5), 2);
    }
}
