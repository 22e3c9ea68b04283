//! Sign-pattern templates such as `(±u^2, ±(u^2-1), ±u, ±u)`.

use std::fmt;

use crate::{Error, Result};

/// A point `(x, y, s, t)`.
pub type Quad = [i64; 4];

/// `sign * (a2 u^2 + a1 u + a0)`, optionally with both signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub both_signs: bool,
    pub negate: bool,
    pub a2: i64,
    pub a1: i64,
    pub a0: i64,
}

impl Component {
    fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Registry(format!("bad template component {text:?}"));
        let mut rest = text.trim();
        let (mut both_signs, mut negate) = (false, false);
        if let Some(r) = rest.strip_prefix('±') {
            both_signs = true;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-').filter(|r| r.starts_with('(')) {
            negate = true;
            rest = r;
        }
        let rest = rest.trim();
        let body = match rest.strip_prefix('(') {
            Some(r) => r.strip_suffix(')').ok_or_else(bad)?,
            None => rest,
        };
        let (mut a2, mut a1, mut a0) = (0i64, 0i64, 0i64);
        let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        // split into signed terms
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (sign, mag) = match term.as_bytes()[0] {
                b'-' => (-1, &term[1..]),
                b'+' => (1, &term[1..]),
                _ => (1, term),
            };
            match mag {
                "u^2" => a2 += sign,
                "u" => a1 += sign,
                digits => a0 += sign * digits.parse::<i64>().map_err(|_| bad())?,
            }
        }
        Ok(Component { both_signs, negate, a2, a1, a0 })
    }

    pub fn depends_on_u(&self) -> bool {
        self.a2 != 0 || self.a1 != 0
    }

    pub fn value(&self, u: i64) -> i64 {
        let v = self.a2 * u * u + self.a1 * u + self.a0;
        if self.negate {
            -v
        } else {
            v
        }
    }

    fn values(&self, u: i64) -> Vec<i64> {
        let v = self.value(u);
        if self.both_signs && v != 0 {
            vec![v, -v]
        } else {
            vec![v]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    text: String,
    components: [Component; 4],
}

impl Template {
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Registry(format!("template {text:?} must be parenthesised")))?;
        // split on top-level commas
        let mut parts = Vec::new();
        let (mut depth, mut start) = (0, 0);
        for (i, ch) in inner.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&inner[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&inner[start..]);
        if parts.len() != 4 {
            return Err(Error::Registry(format!("template {text:?} needs four components")));
        }
        let comps: Vec<Component> = parts.into_iter().map(Component::parse).collect::<Result<_>>()?;
        Ok(Template { text: text.trim().to_string(), components: comps.try_into().expect("four") })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn components(&self) -> &[Component; 4] {
        &self.components
    }

    pub fn is_parametric(&self) -> bool {
        self.components.iter().any(Component::depends_on_u)
    }

    /// Every sign choice at parameter `u`.
    pub fn instances(&self, u: i64) -> Vec<Quad> {
        let mut out = vec![[0i64; 4]];
        for (k, comp) in self.components.iter().enumerate() {
            let vals = comp.values(u);
            out = out
                .into_iter()
                .flat_map(|q| {
                    vals.iter().map(move |&v| {
                        let mut q = q;
                        q[k] = v;
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Largest `|a0|` among the components.
    pub fn max_constant(&self) -> i64 {
        self.components.iter().map(|c| c.a0.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_components() {
        let t = Template::parse("(±u^2, ±(u^2-1), ±u, 0)").unwrap();
        assert!(t.is_parametric());
        assert_eq!(t.components()[1], Component { both_signs: true, negate: false, a2: 1, a1: 0, a0: -1 });
        let mut inst = t.instances(2);
        inst.sort();
        assert_eq!(inst.len(), 8);
        assert_eq!(inst[0], [-4, -3, -2, 0]);
        let t = Template::parse("(0, ±2, 0, ±1)").unwrap();
        assert!(!t.is_parametric());
        assert_eq!(t.instances(0).len(), 4);
        assert!(Template::parse("(1, 2, 3)").is_err());
        assert!(Template::parse("(1, 2, 3, v)").is_err());
        assert!(Template::parse("1, 2, 3, 4").is_err());
    }
}
