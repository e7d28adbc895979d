//! Text form of groups: `C<n>`, `D<n>`, `Q<n>`, `S<n>`, `A<n>`, `SD:<P>,<Q>,<k>`,
//! `X:<spec>*<spec>...`, or an inline JSON table.

use super::{FiniteGroup, GroupError};

fn parse_err(spec: &str, reason: impl Into<String>) -> GroupError {
    GroupError::Parse { spec: spec.to_string(), reason: reason.into() }
}

fn number<T: std::str::FromStr>(spec: &str, s: &str) -> Result<T, GroupError> {
    s.trim().parse().map_err(|_| parse_err(spec, format!("expected an integer, got `{s}`")))
}

/// Parses the group mini-language. Inline JSON (`{"order": ..}`) is accepted too.
pub fn parse_group_spec(spec: &str) -> Result<FiniteGroup, GroupError> {
    let s = spec.trim();
    if s.starts_with('{') {
        return FiniteGroup::from_json_str(s);
    }
    if let Some(rest) = s.strip_prefix("X:") {
        let mut factors = rest.split('*').map(parse_group_spec);
        let first = factors.next().ok_or_else(|| parse_err(spec, "empty product"))??;
        return factors.try_fold(first, |acc, g| FiniteGroup::direct_product(&acc, &g?));
    }
    if let Some(rest) = s.strip_prefix("SD:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(parse_err(spec, "SD needs three arguments P,Q,k"));
        }
        let p: u64 = number(spec, parts[0])?;
        let q: u64 = number(spec, parts[1])?;
        let k: i64 = number(spec, parts[2])?;
        return FiniteGroup::semidirect_cyclic(p, q, k);
    }
    let mut chars = s.chars();
    let kind = chars.next().ok_or_else(|| parse_err(spec, "empty spec"))?;
    let n: usize = number(spec, chars.as_str())?;
    match kind {
        'C' => FiniteGroup::cyclic(n),
        'D' => FiniteGroup::dihedral(n),
        'Q' => FiniteGroup::quaternion(n),
        'S' if (1..=6).contains(&n) => FiniteGroup::symmetric(n),
        'A' if (1..=6).contains(&n) => FiniteGroup::alternating(n),
        'S' | 'A' => Err(parse_err(spec, "symmetric and alternating groups are limited to degree 6")),
        _ => Err(parse_err(spec, format!("unknown group family `{kind}`"))),
    }
}

impl std::str::FromStr for FiniteGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group_spec(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        for (spec, order) in [
            ("C1", 1),
            ("C12", 12),
            ("D5", 10),
            ("Q8", 8),
            ("Q16", 16),
            ("Q32", 32),
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("A5", 60),
            ("SD:7,3,2", 21),
            ("SD:3,2,-1", 6),
            ("X:C2*C2", 4),
            ("X:C2*C2*C3", 12),
            ("X:Q8*SD:7,3,2", 168),
        ] {
            let g = parse_group_spec(spec).unwrap();
            assert_eq!(g.order(), order, "{spec}");
        }
    }

    #[test]
    fn inline_json() {
        let g = parse_group_spec(r#"{"order": 2, "table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn rejects_garbage() {
        for spec in ["", "Z5", "C", "Cx", "SD:7,3", "SD:7,2,2", "Q12", "S9", "C4096"] {
            assert!(parse_group_spec(spec).is_err(), "{spec}");
        }
    }
}
