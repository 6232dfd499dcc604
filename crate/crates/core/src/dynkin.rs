//! Type labels and classification of connected finite-type Dynkin diagrams.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{dot, Rational, RootVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynkinError {
    #[error("Cartan integer {value} between nodes {i} and {j} is not a finite-type value")]
    BadCartanInteger { i: usize, j: usize, value: Rational },
    #[error("diagram on nodes {0:?} is not of finite type")]
    NotFiniteType(Vec<usize>),
    #[error("cannot parse type label {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeFamily {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

impl TypeFamily {
    pub fn is_classical(self) -> bool {
        matches!(self, Self::A | Self::B | Self::C | Self::D | Self::BC)
    }

    pub fn is_exceptional(self) -> bool {
        !self.is_classical()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::D => "D",
            Self::E => "E",
            Self::F => "F",
            Self::G => "G",
            Self::BC => "BC",
        }
    }
}

/// An irreducible type such as `A2`, `BC3` or `E7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    pub family: TypeFamily,
    pub rank: usize,
}

impl TypeLabel {
    pub const fn new(family: TypeFamily, rank: usize) -> Self {
        TypeLabel { family, rank }
    }

    /// Rewrite low-rank coincidences to one spelling: B1, C1 → A1, C2 → B2,
    /// D3 → A3. `D2` has no irreducible spelling and is left alone.
    pub fn normalized(self) -> Self {
        use TypeFamily::*;
        match (self.family, self.rank) {
            (B | C, 1) => TypeLabel::new(A, 1),
            (C, 2) => TypeLabel::new(B, 2),
            (D, 3) => TypeLabel::new(A, 3),
            _ => self,
        }
    }

    /// Number of roots of the irreducible system of this type.
    pub fn root_count(self) -> usize {
        use TypeFamily::*;
        let r = self.rank;
        match self.family {
            A => r * (r + 1),
            B | C => 2 * r * r,
            D => 2 * r * (r - 1),
            BC => 2 * r * r + 2 * r,
            E => match r {
                6 => 72,
                7 => 126,
                8 => 240,
                _ => 0,
            },
            F => 48,
            G => 12,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.as_str(), self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let split = t.find(|c: char| c.is_ascii_digit()).ok_or_else(|| DynkinError::Parse(s.into()))?;
        let (fam, rank) = t.split_at(split);
        let family = match fam {
            "A" => TypeFamily::A,
            "B" => TypeFamily::B,
            "C" => TypeFamily::C,
            "D" => TypeFamily::D,
            "E" => TypeFamily::E,
            "F" => TypeFamily::F,
            "G" => TypeFamily::G,
            "BC" => TypeFamily::BC,
            _ => return Err(DynkinError::Parse(s.into())),
        };
        let rank: usize = rank.parse().map_err(|_| DynkinError::Parse(s.into()))?;
        if rank == 0 {
            return Err(DynkinError::Parse(s.into()));
        }
        Ok(TypeLabel { family, rank })
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Render a decomposition like `A3+A2`, largest rank first; empty → `0`.
pub fn format_decomposition(types: &[TypeLabel]) -> String {
    if types.is_empty() {
        return "0".to_string();
    }
    let mut v = types.to_vec();
    v.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.cmp(b)));
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("+")
}

/// One connected component of a Dynkin diagram: node indices (ascending) and type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramComponent {
    pub nodes: Vec<usize>,
    pub label: TypeLabel,
}

/// Bond data extracted from a set of simple roots.
#[derive(Debug, Clone)]
pub struct Diagram {
    /// Squared lengths of the nodes.
    pub lengths: Vec<Rational>,
    /// `bonds[i][j]` = product of the two Cartan integers (0..=3).
    pub bonds: Vec<Vec<u8>>,
}

impl Diagram {
    pub fn from_simple_roots(simple: &[RootVector]) -> Result<Self, DynkinError> {
        let n = simple.len();
        let lengths: Vec<Rational> = simple.iter().map(RootVector::norm2).collect();
        let mut bonds = vec![vec![0u8; n]; n];
        let two = Rational::from_int(2);
        for i in 0..n {
            for j in i + 1..n {
                let ip = dot(&simple[i], &simple[j]);
                if ip.is_zero() {
                    continue;
                }
                let aij = &(&two * &ip) / &lengths[j];
                let aji = &(&two * &ip) / &lengths[i];
                for (v, a, b) in [(&aij, i, j), (&aji, j, i)] {
                    if !v.is_integer() || v.is_positive() || *v < -3 {
                        return Err(DynkinError::BadCartanInteger { i: a, j: b, value: v.clone() });
                    }
                }
                let m = &aij * &aji;
                let m = m.to_i64().unwrap_or(99);
                if !(1..=3).contains(&m) {
                    return Err(DynkinError::BadCartanInteger { i, j, value: aij });
                }
                bonds[i][j] = m as u8;
                bonds[j][i] = m as u8;
            }
        }
        Ok(Diagram { lengths, bonds })
    }

    /// Same as [`Diagram::from_simple_roots`] from an integer Gram matrix.
    pub fn from_int_gram(gram: &[Vec<i64>]) -> Result<Self, DynkinError> {
        let n = gram.len();
        let mut bonds = vec![vec![0u8; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let g = gram[i][j];
                if g == 0 {
                    continue;
                }
                let (ni, nj) = (gram[i][i], gram[j][j]);
                if g > 0 || (2 * g) % ni != 0 || (2 * g) % nj != 0 {
                    return Err(DynkinError::BadCartanInteger {
                        i,
                        j,
                        value: Rational::new(2 * g, nj),
                    });
                }
                let m = (2 * g / ni) * (2 * g / nj);
                if !(1..=3).contains(&m) {
                    return Err(DynkinError::BadCartanInteger { i, j, value: Rational::new(2 * g, nj) });
                }
                bonds[i][j] = m as u8;
                bonds[j][i] = m as u8;
            }
        }
        let lengths = (0..n).map(|i| Rational::from_int(gram[i][i])).collect();
        Ok(Diagram { lengths, bonds })
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    fn neighbours(&self, i: usize, within: &[usize]) -> Vec<usize> {
        within.iter().copied().filter(|&j| self.bonds[i][j] > 0).collect()
    }

    /// Connected components, each sorted, ordered by smallest node.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                for v in 0..n {
                    if !seen[v] && self.bonds[u][v] > 0 {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Classify every connected component.
    pub fn classify(&self) -> Result<Vec<DiagramComponent>, DynkinError> {
        self.connected_components()
            .into_iter()
            .map(|nodes| {
                let label = self.classify_component(&nodes)?;
                Ok(DiagramComponent { nodes, label })
            })
            .collect()
    }

    /// Classify one connected node set. The label is normalized.
    pub fn classify_component(&self, nodes: &[usize]) -> Result<TypeLabel, DynkinError> {
        use TypeFamily::*;
        let r = nodes.len();
        let fail = || DynkinError::NotFiniteType(nodes.to_vec());
        if r == 1 {
            return Ok(TypeLabel::new(A, 1));
        }
        let mut edges = Vec::new();
        for (a, &i) in nodes.iter().enumerate() {
            for &j in &nodes[a + 1..] {
                if self.bonds[i][j] > 0 {
                    edges.push((i, j, self.bonds[i][j]));
                }
            }
        }
        // A connected finite-type diagram is a tree.
        if edges.len() != r - 1 {
            return Err(fail());
        }
        let degree = |i: usize| self.neighbours(i, nodes).len();
        let multiple: Vec<_> = edges.iter().filter(|e| e.2 > 1).collect();
        match multiple.len() {
            0 => {}
            1 => {
                let (i, j, m) = *multiple[0];
                if nodes.iter().any(|&v| degree(v) > 2) {
                    return Err(fail());
                }
                if m == 3 {
                    return if r == 2 { Ok(TypeLabel::new(G, 2)) } else { Err(fail()) };
                }
                if r == 2 {
                    return Ok(TypeLabel::new(B, 2));
                }
                let (di, dj) = (degree(i), degree(j));
                if di == 2 && dj == 2 {
                    return if r == 4 { Ok(TypeLabel::new(F, 4)) } else { Err(fail()) };
                }
                // The double bond sits at an end; `leaf` is the end node.
                let (leaf, inner) = if di == 1 { (i, j) } else { (j, i) };
                let fam = if self.lengths[leaf] < self.lengths[inner] { B } else { C };
                return Ok(TypeLabel::new(fam, r).normalized());
            }
            _ => return Err(fail()),
        }
        let branch: Vec<usize> = nodes.iter().copied().filter(|&v| degree(v) >= 3).collect();
        if branch.is_empty() {
            return Ok(TypeLabel::new(A, r));
        }
        if branch.len() > 1 || degree(branch[0]) != 3 {
            return Err(fail());
        }
        let centre = branch[0];
        let mut arms: Vec<usize> = self
            .neighbours(centre, nodes)
            .into_iter()
            .map(|start| {
                let (mut prev, mut cur, mut len) = (centre, start, 1);
                loop {
                    let next: Vec<usize> =
                        self.neighbours(cur, nodes).into_iter().filter(|&x| x != prev).collect();
                    match next.as_slice() {
                        [] => break len,
                        [x] => {
                            prev = cur;
                            cur = *x;
                            len += 1;
                        }
                        _ => break usize::MAX,
                    }
                }
            })
            .collect();
        arms.sort_unstable();
        match arms.as_slice() {
            [1, 1, _] => Ok(TypeLabel::new(D, r)),
            [1, 2, 2] => Ok(TypeLabel::new(E, 6)),
            [1, 2, 3] => Ok(TypeLabel::new(E, 7)),
            [1, 2, 4] => Ok(TypeLabel::new(E, 8)),
            _ => Err(fail()),
        }
    }
}

/// Cartan matrix `a[i][j] = 2<α_i, α_j> / <α_j, α_j>`.
pub fn cartan_matrix(simple: &[RootVector]) -> Vec<Vec<Rational>> {
    let two = Rational::from_int(2);
    simple
        .iter()
        .map(|ai| {
            simple
                .iter()
                .map(|aj| &(&two * &dot(ai, aj)) / &aj.norm2())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use TypeFamily::*;

    fn v(x: &[i64]) -> RootVector {
        RootVector::from_ints(x)
    }

    fn classify(simple: &[RootVector]) -> Vec<TypeLabel> {
        Diagram::from_simple_roots(simple)
            .unwrap()
            .classify()
            .unwrap()
            .into_iter()
            .map(|c| c.label)
            .collect()
    }

    #[test]
    fn label_roundtrip_and_counts() {
        for s in ["A1", "BC3", "E7", "F4", "G2", "D5"] {
            assert_eq!(s.parse::<TypeLabel>().unwrap().to_string(), s);
        }
        assert!("X2".parse::<TypeLabel>().is_err());
        assert!("A0".parse::<TypeLabel>().is_err());
        assert_eq!(TypeLabel::new(BC, 3).root_count(), 24);
        assert_eq!(TypeLabel::new(D, 4).root_count(), 24);
        assert_eq!(TypeLabel::new(C, 2).normalized(), TypeLabel::new(B, 2));
    }

    #[test]
    fn decomposition_format() {
        let t = [TypeLabel::new(A, 2), TypeLabel::new(A, 3)];
        assert_eq!(format_decomposition(&t), "A3+A2");
        assert_eq!(format_decomposition(&[]), "0");
    }

    #[test]
    fn classify_b_and_c() {
        let b3 = [v(&[1, -1, 0]), v(&[0, 1, -1]), v(&[0, 0, 1])];
        assert_eq!(classify(&b3), vec![TypeLabel::new(B, 3)]);
        let c3 = [v(&[1, -1, 0]), v(&[0, 1, -1]), v(&[0, 0, 2])];
        assert_eq!(classify(&c3), vec![TypeLabel::new(C, 3)]);
        // Reverse node order must not matter.
        let c3r: Vec<_> = c3.iter().rev().cloned().collect();
        assert_eq!(classify(&c3r), vec![TypeLabel::new(C, 3)]);
    }

    #[test]
    fn classify_d4_and_two_components() {
        let d4 = [v(&[1, -1, 0, 0]), v(&[0, 1, -1, 0]), v(&[0, 0, 1, -1]), v(&[0, 0, 1, 1])];
        assert_eq!(classify(&d4), vec![TypeLabel::new(D, 4)]);
        let a1a1 = [v(&[1, -1, 0, 0]), v(&[0, 0, 1, -1])];
        assert_eq!(classify(&a1a1), vec![TypeLabel::new(A, 1); 2]);
    }

    #[test]
    fn rejects_cycle() {
        // Three vectors at 120 degrees pairwise span only a plane; affine A2.
        let cyc = [v(&[1, -1, 0]), v(&[0, 1, -1]), v(&[-1, 0, 1])];
        let d = Diagram::from_simple_roots(&cyc).unwrap();
        assert!(d.classify().is_err());
    }
}
