use crate::error::{Error, Result};

/// A generating set of permutations on `{0, .., degree - 1}`, each given as
/// its image array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermList {
    degree: usize,
    perms: Vec<Vec<usize>>,
}

impl PermList {
    pub fn new(degree: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        for (i, p) in perms.iter().enumerate() {
            check_image_array(degree, p)
                .map_err(|reason| Error::InvalidPermutation(format!("generator {i}: {reason}")))?;
        }
        Ok(Self { degree, perms })
    }

    /// Builds a generating set from 0-based cycle lists, one list of cycles
    /// per generator.
    pub fn from_cycles(degree: usize, gens: &[Vec<Vec<usize>>]) -> Result<Self> {
        let perms = gens
            .iter()
            .map(|cycles| perm_from_cycles(degree, cycles))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, perms)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }
}

fn check_image_array(degree: usize, p: &[usize]) -> std::result::Result<(), String> {
    if p.len() != degree {
        return Err(format!("length {} does not match degree {degree}", p.len()));
    }
    let mut seen = vec![false; degree];
    for &img in p {
        if img >= degree {
            return Err(format!("image {img} out of range"));
        }
        if std::mem::replace(&mut seen[img], true) {
            return Err(format!("image {img} repeated"));
        }
    }
    Ok(())
}

pub fn perm_from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut img: Vec<usize> = (0..degree).collect();
    let mut touched = vec![false; degree];
    for cycle in cycles {
        for (pos, &a) in cycle.iter().enumerate() {
            if a >= degree {
                return Err(Error::InvalidPermutation(format!(
                    "point {} exceeds degree {degree}",
                    a + 1
                )));
            }
            if std::mem::replace(&mut touched[a], true) {
                return Err(Error::InvalidPermutation(format!(
                    "point {} appears in more than one cycle",
                    a + 1
                )));
            }
            img[a] = cycle[(pos + 1) % cycle.len()];
        }
    }
    Ok(img)
}

/// `a` then `b`: the image of `i` is `b[a[i]]`.
pub(crate) fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&i| b[i]).collect()
}

/// 1-based cycle notation, `()` for the identity.
pub fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push('(');
        out.push_str(&cycle.join(","));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(PermList::new(3, vec![vec![0, 0, 1]]).is_err());
        assert!(PermList::new(3, vec![vec![0, 1]]).is_err());
        assert!(PermList::new(3, vec![vec![0, 1, 3]]).is_err());
        assert!(PermList::new(0, vec![]).is_err());
    }

    #[test]
    fn cycles_round_trip_through_labels() {
        let p = perm_from_cycles(4, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(p, vec![1, 2, 0, 3]);
        assert_eq!(cycle_label(&p), "(1,2,3)");
        assert_eq!(cycle_label(&[0, 1]), "()");
        assert!(perm_from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = vec![1, 2, 0];
        let b = vec![1, 0, 2];
        // 0 -a-> 1 -b-> 0
        assert_eq!(compose(&a, &b), vec![0, 2, 1]);
    }
}
