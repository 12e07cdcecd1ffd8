use std::collections::BTreeMap;

use serde::Serialize;

use super::finite::{CosetDecomposition, FiniteGroup, SubgroupData, MAX_ORDER};
use super::GroupError;

/// An action `φ : H → Aut(N)` stored as the table `(h, n) ↦ φ_h(n)`.
#[derive(Clone, Debug)]
pub struct Action {
    acting_order: usize,
    target_order: usize,
    map: Vec<u16>,
}

impl Action {
    /// Tabulates `phi` and checks that each `φ_h` is an automorphism of `n_group`
    /// and that `h ↦ φ_h` is a homomorphism.
    pub fn new(
        h_group: &FiniteGroup,
        n_group: &FiniteGroup,
        phi: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        let (ho, no) = (h_group.order(), n_group.order());
        let mut map = Vec::with_capacity(ho * no);
        for h in h_group.elements() {
            for n in n_group.elements() {
                let image = phi(h, n);
                if image >= no {
                    return Err(GroupError::InvalidAction(format!("φ_{h}({n}) = {image} out of range")));
                }
                map.push(image as u16);
            }
        }
        let action = Action { acting_order: ho, target_order: no, map };
        action.validate(h_group, n_group)?;
        Ok(action)
    }

    /// The trivial action.
    pub fn trivial(h_group: &FiniteGroup, n_group: &FiniteGroup) -> Self {
        Self::new(h_group, n_group, |_, n| n).expect("trivial action is valid")
    }

    fn validate(&self, h_group: &FiniteGroup, n_group: &FiniteGroup) -> Result<(), GroupError> {
        for h in h_group.elements() {
            let mut seen = vec![false; self.target_order];
            for n in n_group.elements() {
                let image = self.apply(h, n);
                if seen[image] {
                    return Err(GroupError::InvalidAction(format!("φ_{h} is not injective")));
                }
                seen[image] = true;
            }
            for a in n_group.elements() {
                for b in n_group.elements() {
                    if self.apply(h, n_group.mul(a, b)) != n_group.mul(self.apply(h, a), self.apply(h, b)) {
                        return Err(GroupError::InvalidAction(format!(
                            "φ_{h} is not multiplicative on ({a}, {b})"
                        )));
                    }
                }
            }
        }
        for n in n_group.elements() {
            if self.apply(h_group.identity(), n) != n {
                return Err(GroupError::InvalidAction("φ_e is not the identity".into()));
            }
        }
        for h in h_group.elements() {
            for g in h_group.elements() {
                let hg = h_group.mul(h, g);
                for n in n_group.elements() {
                    if self.apply(hg, n) != self.apply(h, self.apply(g, n)) {
                        return Err(GroupError::InvalidAction(format!(
                            "φ_{{{h}·{g}}} differs from φ_{h}∘φ_{g}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, h: usize, n: usize) -> usize {
        self.map[h * self.target_order + n] as usize
    }

    pub fn acting_order(&self) -> usize {
        self.acting_order
    }
}

/// `G = N ⋊_φ H` with elements encoded as `n·|H| + h`.
#[derive(Clone, Debug)]
pub struct SemidirectPresentation {
    n_group: FiniteGroup,
    h_group: FiniteGroup,
    action: Action,
    g: FiniteGroup,
}

impl SemidirectPresentation {
    pub fn build(n_group: FiniteGroup, h_group: FiniteGroup, action: Action) -> Result<Self, GroupError> {
        let order = n_group.order() * h_group.order();
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge { order, max: MAX_ORDER });
        }
        if action.acting_order != h_group.order() || action.target_order != n_group.order() {
            return Err(GroupError::InvalidAction("action tables do not match the groups".into()));
        }
        action.validate(&h_group, &n_group)?;
        let ho = h_group.order();
        let g = FiniteGroup::from_fn(order, |a, b| {
            let (n1, h1) = (a / ho, a % ho);
            let (n2, h2) = (b / ho, b % ho);
            let n = n_group.mul(n1, action.apply(h1, n2));
            let h = h_group.mul(h1, h2);
            n * ho + h
        })?;
        Ok(SemidirectPresentation { n_group, h_group, action, g })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn normal_factor(&self) -> &FiniteGroup {
        &self.n_group
    }

    pub fn complement(&self) -> &FiniteGroup {
        &self.h_group
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    #[inline]
    pub fn encode(&self, n: usize, h: usize) -> usize {
        n * self.h_group.order() + h
    }

    #[inline]
    pub fn decompose(&self, g: usize) -> (usize, usize) {
        (g / self.h_group.order(), g % self.h_group.order())
    }

    pub fn embed_n(&self, n: usize) -> usize {
        self.encode(n, self.h_group.identity())
    }

    pub fn embed_h(&self, h: usize) -> usize {
        self.encode(self.n_group.identity(), h)
    }

    pub fn in_normal_factor(&self, g: usize) -> bool {
        self.decompose(g).1 == self.h_group.identity()
    }

    /// Image of `N` in `G`.
    pub fn normal_subgroup(&self) -> SubgroupData {
        SubgroupData::new(&self.g, self.n_group.elements().map(|n| self.embed_n(n)))
            .expect("N embeds as a subgroup")
    }

    /// Image of `H` in `G`.
    pub fn complement_subgroup(&self) -> SubgroupData {
        SubgroupData::new(&self.g, self.h_group.elements().map(|h| self.embed_h(h)))
            .expect("H embeds as a subgroup")
    }

    /// Image of a subgroup of `N` in `G`.
    pub fn embed_subgroup_of_n(&self, sub: &SubgroupData) -> SubgroupData {
        SubgroupData::new(&self.g, sub.members().iter().map(|&n| self.embed_n(n)))
            .expect("subgroup of N embeds")
    }

    fn non_identity_h(&self) -> impl Iterator<Item = usize> + '_ {
        let e = self.h_group.identity();
        self.h_group.elements().filter(move |&h| h != e)
    }

    /// `φ_h(N′) ⊆ N′` for every `h`.
    pub fn is_stable(&self, n_prime: &SubgroupData) -> bool {
        self.h_group.elements().all(|h| {
            n_prime.members().iter().all(|&m| n_prime.contains(self.action.apply(h, m)))
        })
    }

    /// The two equivalent conditions: (`N′ ⊴ N` and `φ_H(N′) ⊆ N′`, `N′ ⊴ G`).
    /// The second is computed by direct conjugation inside `G`.
    pub fn check_normality_equivalence(&self, n_prime: &SubgroupData) -> (bool, bool) {
        let first = n_prime.is_normal_in_parent() && self.is_stable(n_prime);
        let embedded = self.embed_subgroup_of_n(n_prime);
        let second = self.g.elements().all(|g| {
            embedded.members().iter().all(|&m| embedded.contains(self.g.conjugate(m, g)))
        });
        (first, second)
    }

    /// `G′ = N′ ⋊ H` as a subgroup of `G`. Requires `N′` to be `H`-stable,
    /// otherwise the product set is not closed.
    pub fn subgroup_over(&self, n_prime: &SubgroupData) -> Result<SubgroupData, GroupError> {
        if !self.is_stable(n_prime) {
            return Err(GroupError::NotStable);
        }
        let members = n_prime
            .members()
            .iter()
            .flat_map(|&n| self.h_group.elements().map(move |h| (n, h)))
            .map(|(n, h)| self.encode(n, h));
        SubgroupData::new(&self.g, members)
    }

    /// `N″ = N/N′` for `N′` normal in `N`.
    pub fn quotient(&self, n_prime: &SubgroupData) -> Result<Quotient, GroupError> {
        if !n_prime.is_normal_in_parent() {
            return Err(GroupError::NotNormal);
        }
        Ok(Quotient::new(&self.n_group, n_prime))
    }

    /// `N″_h`: cosets `xN′` with `φ_h(x)N′ = xN′`, as a subgroup of the
    /// quotient group.
    pub fn fixed_subgroup(&self, n_prime: &SubgroupData, h: usize) -> Result<SubgroupData, GroupError> {
        if h == self.h_group.identity() {
            return Err(GroupError::IdentityComplement);
        }
        if h >= self.h_group.order() {
            return Err(GroupError::NotASubgroup(format!("{h} is not an element of H")));
        }
        let (_, normal_in_g) = self.check_normality_equivalence(n_prime);
        if !normal_in_g {
            return Err(GroupError::NotNormal);
        }
        let quotient = self.quotient(n_prime)?;
        let fixed = (0..quotient.len()).filter(|&c| {
            quotient.cosets.coset_of(self.action.apply(h, quotient.cosets.representative(c))) == c
        });
        SubgroupData::new(quotient.group(), fixed)
    }

    /// Fiber sizes of `x ↦ φ_h(x)·x⁻¹` on `N″`, keyed by image coset.
    pub fn twisted_map_fibers(&self, n_prime: &SubgroupData, h: usize) -> Result<BTreeMap<usize, usize>, GroupError> {
        let quotient = self.quotient(n_prime)?;
        if !self.is_stable(n_prime) {
            return Err(GroupError::NotStable);
        }
        let mut fibers = BTreeMap::new();
        for c in 0..quotient.len() {
            let x = quotient.cosets.representative(c);
            let image = self.n_group.mul(self.action.apply(h, x), self.n_group.inv(x));
            *fibers.entry(quotient.cosets.coset_of(image)).or_insert(0) += 1;
        }
        Ok(fibers)
    }

    /// `|G|, |N′|, |N″|, |H|` and `|N″_h|` for each non-identity `h`.
    ///
    /// When `N′` is not `H`-stable, `φ_h` does not descend to `N″`; the
    /// reported `N″_h` is then the image in `N/N′` of the points of `N`
    /// fixed by `φ_h`, and `quotient_action_defined` is false.
    pub fn invariants(&self, n_prime: &SubgroupData) -> Result<GroupInvariants, GroupError> {
        let quotient = self.quotient(n_prime)?;
        let (lemma, _) = self.check_normality_equivalence(n_prime);
        let mut fixed_sets = BTreeMap::new();
        for h in self.non_identity_h() {
            let set: Vec<usize> = if lemma {
                self.fixed_subgroup(n_prime, h)?.members().to_vec()
            } else {
                let mut cosets: Vec<usize> = self
                    .n_group
                    .elements()
                    .filter(|&n| self.action.apply(h, n) == n)
                    .map(|n| quotient.cosets.coset_of(n))
                    .collect();
                cosets.sort_unstable();
                cosets.dedup();
                cosets
            };
            fixed_sets.insert(h, set);
        }
        Ok(GroupInvariants {
            n: self.g.order(),
            n_prime: n_prime.order(),
            n_dprime: quotient.len(),
            h: self.h_group.order(),
            n_h_dprime: fixed_sets.iter().map(|(&h, s)| (h, s.len())).collect(),
            fixed_sets,
            quotient_action_defined: lemma,
        })
    }
}

/// `N/N′` with canonical minimal-index coset representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    cosets: CosetDecomposition,
    group: FiniteGroup,
}

impl Quotient {
    fn new(n_group: &FiniteGroup, n_prime: &SubgroupData) -> Self {
        let cosets = CosetDecomposition::left(n_group, n_prime);
        let group = FiniteGroup::from_fn(cosets.len(), |a, b| {
            cosets.coset_of(n_group.mul(cosets.representative(a), cosets.representative(b)))
        })
        .expect("quotient by a normal subgroup is a group");
        Quotient { cosets, group }
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn cosets(&self) -> &CosetDecomposition {
        &self.cosets
    }
}

/// The integers `n, n′, n″, h, n″_h` attached to a presentation and `N′`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupInvariants {
    pub n: usize,
    pub n_prime: usize,
    pub n_dprime: usize,
    pub h: usize,
    /// `h ↦ |N″_h|` over non-identity `h ∈ H`.
    pub n_h_dprime: BTreeMap<usize, usize>,
    #[serde(skip)]
    pub fixed_sets: BTreeMap<usize, Vec<usize>>,
    pub quotient_action_defined: bool,
}

impl GroupInvariants {
    /// The common `|N″_h|` when all non-identity `h` agree; `None` when `H`
    /// is trivial or the sizes differ.
    pub fn common_n_h_dprime(&self) -> Option<usize> {
        let mut sizes = self.n_h_dprime.values().copied();
        let first = sizes.next()?;
        sizes.all(|s| s == first).then_some(first)
    }
}

/// Left-multiplication action of `G` on the cosets `G/G′`.
#[derive(Clone, Debug)]
pub struct CosetAction {
    degree: usize,
    perms: Vec<Vec<u16>>,
}

impl CosetAction {
    pub fn new(g: &FiniteGroup, sub: &SubgroupData) -> Self {
        let cosets = CosetDecomposition::left(g, sub);
        let perms = g
            .elements()
            .map(|x| {
                (0..cosets.len())
                    .map(|c| cosets.coset_of(g.mul(x, cosets.representative(c))) as u16)
                    .collect()
            })
            .collect();
        CosetAction { degree: cosets.len(), perms }
    }

    /// Number of cosets.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn permutation(&self, g: usize) -> &[u16] {
        &self.perms[g]
    }

    pub fn fixed_points(&self, g: usize) -> usize {
        self.perms[g].iter().enumerate().filter(|&(i, &j)| i == j as usize).count()
    }

    /// Sorted cycle lengths of `g` acting on the cosets.
    pub fn cycle_type(&self, g: usize) -> Vec<usize> {
        let perm = &self.perms[g];
        let mut seen = vec![false; self.degree];
        let mut lengths = Vec::new();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        lengths
    }

    /// `action(a·b) = action(a) ∘ action(b)`.
    pub fn respects_product(&self, g: &FiniteGroup, a: usize, b: usize) -> bool {
        let ab = &self.perms[g.mul(a, b)];
        let (pa, pb) = (&self.perms[a], &self.perms[b]);
        (0..self.degree).all(|i| ab[i] == pa[pb[i] as usize])
    }
}
