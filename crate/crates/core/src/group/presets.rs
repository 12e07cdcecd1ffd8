//! Named presentations: `N ⋊ C₂` by inversion, `Sₖ = Aₖ ⋊ C₂`,
//! `A₄ = V₄ ⋊ C₃`, and the Galois case with trivial complement.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::finite::{group_from_permutations, FiniteGroup, SubgroupData, MAX_ORDER};
use super::semidirect::{Action, SemidirectPresentation};
use super::GroupError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresetName {
    /// `C_k ⋊ C₂` with inversion, the dihedral group of order `2k`.
    Dihedral(usize),
    /// `A_k ⋊ ⟨(1 2)⟩` acting by conjugation.
    Symmetric(usize),
    /// `V₄ ⋊ C₃` acting by conjugation.
    Alternating4,
    /// `C_k` with trivial complement.
    GaloisCyclic(usize),
    /// Custom group from a multiplication-table file, trivial complement.
    GaloisTable(PathBuf),
}

impl FromStr for PresetName {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::UnknownPreset(s.to_string());
        let parse_k = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let s_trim = s.trim();
        if s_trim.eq_ignore_ascii_case("a4") || s_trim.eq_ignore_ascii_case("alternating4") {
            return Ok(PresetName::Alternating4);
        }
        let (head, rest) = s_trim.split_once(':').ok_or_else(bad)?;
        match head.to_ascii_lowercase().as_str() {
            "dihedral" => Ok(PresetName::Dihedral(parse_k(rest)?)),
            "symmetric" => Ok(PresetName::Symmetric(parse_k(rest)?)),
            "galois" => match rest.split_once(':') {
                Some(("cyclic", k)) => Ok(PresetName::GaloisCyclic(parse_k(k)?)),
                Some(("table", path)) => Ok(PresetName::GaloisTable(PathBuf::from(path))),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetName::Dihedral(k) => write!(f, "dihedral:{k}"),
            PresetName::Symmetric(k) => write!(f, "symmetric:{k}"),
            PresetName::Alternating4 => write!(f, "a4"),
            PresetName::GaloisCyclic(k) => write!(f, "galois:cyclic:{k}"),
            PresetName::GaloisTable(p) => write!(f, "galois:table:{}", p.display()),
        }
    }
}

/// A candidate `N′ ≤ N` together with whether it satisfies the normality
/// conditions needed for `G′ = N′ ⋊ H`.
#[derive(Clone, Debug)]
pub struct NPrimeChoice {
    pub label: String,
    pub subgroup: SubgroupData,
    pub admissible: bool,
}

#[derive(Clone, Debug)]
pub struct Preset {
    pub name: PresetName,
    pub presentation: SemidirectPresentation,
    pub n_prime_choices: Vec<NPrimeChoice>,
}

impl Preset {
    pub fn n_prime(&self, label: &str) -> Result<&NPrimeChoice, GroupError> {
        self.n_prime_choices
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| GroupError::UnknownNPrime {
                label: label.to_string(),
                available: self.n_prime_choices.iter().map(|c| c.label.clone()).collect(),
            })
    }

    pub fn trivial_n_prime(&self) -> &NPrimeChoice {
        self.n_prime("trivial").expect("every preset offers the trivial N′")
    }
}

fn choice(pres: &SemidirectPresentation, label: impl Into<String>, sub: SubgroupData) -> NPrimeChoice {
    let (lemma, _) = pres.check_normality_equivalence(&sub);
    NPrimeChoice { label: label.into(), subgroup: sub, admissible: lemma }
}

fn check_bound(order: usize) -> Result<(), GroupError> {
    if order > MAX_ORDER {
        Err(GroupError::OrderTooLarge { order, max: MAX_ORDER })
    } else {
        Ok(())
    }
}

/// Builds a preset presentation and its list of `N′` candidates.
pub fn preset(name: &PresetName) -> Result<Preset, GroupError> {
    let (presentation, choices) = match name {
        PresetName::Dihedral(k) => dihedral(*k)?,
        PresetName::Symmetric(k) => symmetric(*k)?,
        PresetName::Alternating4 => alternating4()?,
        PresetName::GaloisCyclic(k) => {
            if *k == 0 {
                return Err(GroupError::UnknownPreset(name.to_string()));
            }
            check_bound(*k)?;
            galois(FiniteGroup::cyclic(*k)?)?
        }
        PresetName::GaloisTable(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| GroupError::MalformedTable(format!("{}: {e}", path.display())))?;
            galois(FiniteGroup::parse_table(&text)?)?
        }
    };
    Ok(Preset { name: name.clone(), presentation, n_prime_choices: choices })
}

type Built = (SemidirectPresentation, Vec<NPrimeChoice>);

fn dihedral(k: usize) -> Result<Built, GroupError> {
    if k < 2 {
        return Err(GroupError::UnknownPreset(format!("dihedral:{k}")));
    }
    check_bound(2 * k)?;
    let n = FiniteGroup::cyclic(k)?;
    let h = FiniteGroup::cyclic(2)?;
    let action = Action::new(&h, &n, |h, x| if h == 0 { x } else { (k - x) % k })?;
    let pres = SemidirectPresentation::build(n, h, action)?;
    let n_group = pres.normal_factor();
    let mut choices = vec![choice(&pres, "trivial", SubgroupData::trivial(n_group))];
    for d in (2..k).filter(|d| k.is_multiple_of(*d)) {
        let sub = SubgroupData::generated_by(n_group, &[k / d])?;
        choices.push(choice(&pres, format!("order{d}"), sub));
    }
    choices.push(choice(&pres, "full", SubgroupData::whole(n_group)));
    Ok((pres, choices))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let k = used.len();
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

fn is_even(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn invert(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Action of a cyclic group generated by `t` on the permutation group
/// `elements` by conjugation `x ↦ t x t⁻¹`.
fn conjugation_action(
    h_group: &FiniteGroup,
    elements: &[Vec<usize>],
    n_group: &FiniteGroup,
    generator: &[usize],
) -> Result<Action, GroupError> {
    let index = |p: &Vec<usize>| elements.iter().position(|q| q == p);
    let order = h_group.order();
    let mut powers = vec![(0..generator.len()).collect::<Vec<_>>()];
    for i in 1..order {
        powers.push(compose(generator, &powers[i - 1]));
    }
    let mut table = vec![vec![0usize; elements.len()]; order];
    for (h, t) in powers.iter().enumerate() {
        let t_inv = invert(t);
        for (x, p) in elements.iter().enumerate() {
            let image = compose(&compose(t, p), &t_inv);
            table[h][x] = index(&image)
                .ok_or_else(|| GroupError::InvalidAction("conjugation leaves the subgroup".into()))?;
        }
    }
    Action::new(h_group, n_group, |h, x| table[h][x])
}

fn symmetric(k: usize) -> Result<Built, GroupError> {
    if k < 2 {
        return Err(GroupError::UnknownPreset(format!("symmetric:{k}")));
    }
    let order: usize = (1..=k).product();
    check_bound(order)?;
    let even: Vec<Vec<usize>> = permutations(k).into_iter().filter(|p| is_even(p)).collect();
    let n = group_from_permutations(&even)?;
    let h = FiniteGroup::cyclic(2)?;
    let mut transposition: Vec<usize> = (0..k).collect();
    transposition.swap(0, 1);
    let action = conjugation_action(&h, &even, &n, &transposition)?;
    let pres = SemidirectPresentation::build(n, h, action)?;
    let choices = vec![choice(&pres, "trivial", SubgroupData::trivial(pres.normal_factor()))];
    Ok((pres, choices))
}

fn alternating4() -> Result<Built, GroupError> {
    let v4 = vec![
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 0, 1],
        vec![3, 2, 1, 0],
    ];
    let n = group_from_permutations(&v4)?;
    let h = FiniteGroup::cyclic(3)?;
    let action = conjugation_action(&h, &v4, &n, &[1, 2, 0, 3])?;
    let pres = SemidirectPresentation::build(n, h, action)?;
    let n_group = pres.normal_factor();
    let choices = vec![
        choice(&pres, "trivial", SubgroupData::trivial(n_group)),
        choice(&pres, "order2", SubgroupData::generated_by(n_group, &[1])?),
        choice(&pres, "full", SubgroupData::whole(n_group)),
    ];
    Ok((pres, choices))
}

fn galois(n: FiniteGroup) -> Result<Built, GroupError> {
    let h = FiniteGroup::trivial();
    let action = Action::trivial(&h, &n);
    let pres = SemidirectPresentation::build(n, h, action)?;
    let choices = vec![choice(&pres, "trivial", SubgroupData::trivial(pres.normal_factor()))];
    Ok((pres, choices))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cli_names() {
        assert_eq!("dihedral:4".parse::<PresetName>().unwrap(), PresetName::Dihedral(4));
        assert_eq!("symmetric:6".parse::<PresetName>().unwrap(), PresetName::Symmetric(6));
        assert_eq!("a4".parse::<PresetName>().unwrap(), PresetName::Alternating4);
        assert_eq!("galois:cyclic:5".parse::<PresetName>().unwrap(), PresetName::GaloisCyclic(5));
        assert!("octahedral:3".parse::<PresetName>().is_err());
        assert_eq!(PresetName::GaloisCyclic(3).to_string(), "galois:cyclic:3");
    }

    #[test]
    fn dihedral_four() {
        let p = preset(&PresetName::Dihedral(4)).unwrap();
        assert_eq!(p.presentation.group().order(), 8);
        let labels: Vec<_> = p.n_prime_choices.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["trivial", "order2", "full"]);
        assert!(p.n_prime_choices.iter().all(|c| c.admissible));
    }

    #[test]
    fn symmetric_six_is_a6_by_c2() {
        let p = preset(&PresetName::Symmetric(6)).unwrap();
        assert_eq!(p.presentation.normal_factor().order(), 360);
        assert_eq!(p.presentation.group().order(), 720);
        assert_eq!(p.n_prime_choices.len(), 1);
        assert_eq!(p.trivial_n_prime().subgroup.order(), 1);
    }

    #[test]
    fn alternating_four_choices() {
        let p = preset(&PresetName::Alternating4).unwrap();
        assert_eq!(p.presentation.group().order(), 12);
        let order2 = p.n_prime("order2").unwrap();
        assert_eq!(order2.subgroup.order(), 2);
        assert!(!order2.admissible);
        assert!(p.trivial_n_prime().admissible);
    }

    #[test]
    fn order_bound_is_enforced() {
        assert!(matches!(
            preset(&PresetName::Symmetric(8)),
            Err(GroupError::OrderTooLarge { .. })
        ));
        assert!(matches!(
            preset(&PresetName::Dihedral(6000)),
            Err(GroupError::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn even_permutations() {
        assert!(is_even(&[0, 1, 2]));
        assert!(is_even(&[1, 2, 0]));
        assert!(!is_even(&[1, 0, 2]));
    }
}
