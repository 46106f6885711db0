use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A registered real variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) u16);

impl Var {
    /// Looks the variable up in the standard registry.
    pub fn named(name: &str) -> Result<Var> {
        VarRegistry::standard().lookup(name)
    }

    pub fn name(self) -> &'static str {
        &VarRegistry::standard().entries[self.0 as usize].name
    }

    pub fn display_name(self) -> &'static str {
        &VarRegistry::standard().entries[self.0 as usize].display
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

#[derive(Debug)]
struct Entry {
    name: String,
    display: String,
}

/// Names of every symbol that appears in the replayed derivation. Complex
/// parameters are registered as a pair of real variables `re_*`, `im_*`.
#[derive(Debug)]
pub struct VarRegistry {
    entries: Vec<Entry>,
    index: HashMap<String, Var>,
    complex: Vec<String>,
}

pub const COMPLEX_PARAMS: [&str; 12] = [
    "alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "alpha7", "alpha8", "alpha9", "alpha", "beta", "gamma",
];

fn greek(name: &str) -> String {
    name.replace("alpha", "α").replace("beta", "β").replace("gamma", "γ")
}

impl VarRegistry {
    fn build() -> Self {
        let mut reg = VarRegistry { entries: Vec::new(), index: HashMap::new(), complex: Vec::new() };
        reg.push("lam", "λ");
        for p in ["a", "b", "c"] {
            let count = if p == "a" { 3 } else { 9 };
            for k in 1..=count {
                let name = format!("{p}{k}");
                reg.push(&name, &name);
            }
        }
        for z in COMPLEX_PARAMS {
            reg.push(&format!("re_{z}"), &format!("Re({})", greek(z)));
            reg.push(&format!("im_{z}"), &format!("Im({})", greek(z)));
            reg.complex.push(z.to_string());
        }
        for r in 1..=3 {
            for c in 1..=3 {
                let name = format!("x{r}{c}");
                reg.push(&name, &name);
            }
        }
        reg.push("t", "t");
        reg.push("s", "s");
        reg
    }

    fn push(&mut self, name: &str, display: &str) {
        let v = Var(self.entries.len() as u16);
        assert!(self.index.insert(name.to_string(), v).is_none(), "duplicate variable {name}");
        self.entries.push(Entry { name: name.to_string(), display: display.to_string() });
    }

    pub fn standard() -> &'static VarRegistry {
        static REG: OnceLock<VarRegistry> = OnceLock::new();
        REG.get_or_init(VarRegistry::build)
    }

    pub fn lookup(&self, name: &str) -> Result<Var> {
        self.index.get(name).copied().ok_or_else(|| Error::UnregisteredVariable(name.to_string()))
    }

    /// `(re, im)` variables of a complex parameter such as `alpha1` or `beta`.
    pub fn complex(&self, name: &str) -> Result<(Var, Var)> {
        if !self.complex.iter().any(|z| z == name) {
            return Err(Error::UnregisteredVariable(name.to_string()));
        }
        Ok((self.lookup(&format!("re_{name}"))?, self.lookup(&format!("im_{name}"))?))
    }

    pub fn is_complex(&self, name: &str) -> bool {
        self.complex.iter().any(|z| z == name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_registry_has_unique_names() {
        let reg = VarRegistry::standard();
        let mut names: Vec<&str> = reg.names().collect();
        let total = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), total);
        assert_eq!(total, 1 + 3 + 9 + 9 + 24 + 9 + 2);
        assert_eq!(Var::named("lam").unwrap().display_name(), "λ");
        assert_eq!(reg.complex("beta").unwrap().0.display_name(), "Re(β)");
        assert!(matches!(Var::named("q7"), Err(Error::UnregisteredVariable(_))));
        assert!(reg.complex("lam").is_err());
    }
}
