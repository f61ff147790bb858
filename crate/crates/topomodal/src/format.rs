//! JSON encodings of spaces, models and interior algebras.
//!
//! Subsets are sorted arrays of point indices. Model valuations are keyed
//! by symbol (`p0`, `i3`); algebra box tables are keyed by the rendered
//! subset (`"[0,1]"`, `"[]"`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use topomodal_core::algebra::{AlgebraError, InteriorAlgebra};
use topomodal_core::semantics::{Model, SemanticsError, Valuation};
use topomodal_core::{PointSet, Space, SpaceError, MAX_POINTS};

#[derive(Debug)]
pub enum FormatError {
    /// Malformed JSON, with 1-based line and column.
    Json { line: usize, column: usize, message: String },
    Point(usize),
    Duplicate(usize),
    Space(SpaceError),
    Semantics(SemanticsError),
    Algebra(AlgebraError),
    Key(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Json { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            FormatError::Point(x) => write!(f, "point index {x} is too large (at most {} points)", MAX_POINTS),
            FormatError::Duplicate(x) => write!(f, "point {x} is listed twice in one set"),
            FormatError::Space(e) => write!(f, "invalid space: {e}"),
            FormatError::Semantics(e) => write!(f, "invalid model: {e}"),
            FormatError::Algebra(e) => write!(f, "invalid algebra: {e}"),
            FormatError::Key(k) => write!(f, "unrecognised key '{k}'"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; the fields carry it
        let message = match message.rfind(" at line ") {
            Some(cut) => message[..cut].to_string(),
            None => message,
        };
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

impl From<SpaceError> for FormatError {
    fn from(e: SpaceError) -> Self {
        FormatError::Space(e)
    }
}

impl From<SemanticsError> for FormatError {
    fn from(e: SemanticsError) -> Self {
        FormatError::Semantics(e)
    }
}

impl From<AlgebraError> for FormatError {
    fn from(e: AlgebraError) -> Self {
        FormatError::Algebra(e)
    }
}

pub fn set_from_points(points: &[usize]) -> Result<PointSet, FormatError> {
    let mut set = PointSet::EMPTY;
    for &x in points {
        if x >= MAX_POINTS {
            return Err(FormatError::Point(x));
        }
        if set.contains(x) {
            return Err(FormatError::Duplicate(x));
        }
        set = set.with(x);
    }
    Ok(set)
}

pub fn set_to_points(set: PointSet) -> Vec<usize> {
    set.iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    pub n: usize,
    pub opens: Vec<Vec<usize>>,
}

impl SpaceJson {
    pub fn from_space(s: &Space) -> SpaceJson {
        SpaceJson {
            n: s.n(),
            opens: s.opens().iter().map(|&o| set_to_points(o)).collect(),
        }
    }

    pub fn to_space(&self) -> Result<Space, FormatError> {
        let opens = self
            .opens
            .iter()
            .map(|o| set_from_points(o))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Space::new(self.n, opens)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub space: SpaceJson,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<usize>>,
}

fn symbol(key: &str) -> Option<(char, u32)> {
    let mut chars = key.chars();
    let kind = chars.next()?;
    let digits = chars.as_str();
    if !matches!(kind, 'p' | 'i') || digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((kind, digits.parse().ok()?))
}

impl ModelJson {
    pub fn from_model(m: &Model) -> ModelJson {
        let mut val = BTreeMap::new();
        for (&p, &a) in m.val().props() {
            val.insert(format!("p{p}"), set_to_points(a));
        }
        for (&i, &w) in m.val().nominals() {
            val.insert(format!("i{i}"), vec![w]);
        }
        ModelJson {
            space: SpaceJson::from_space(m.space()),
            val,
        }
    }

    pub fn to_model(&self) -> Result<Model, FormatError> {
        let space = self.space.to_space()?;
        let mut val = Valuation::new();
        for (key, points) in &self.val {
            let set = set_from_points(points)?;
            match symbol(key) {
                Some(('p', p)) => val.set_prop(p, set),
                Some((_, i)) => val.set_nominal_set(i, set)?,
                None => return Err(FormatError::Key(key.clone())),
            }
        }
        Ok(Model::new(space, val)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub atoms: usize,
    #[serde(rename = "box")]
    pub boxes: BTreeMap<String, Vec<usize>>,
}

fn parse_set_key(key: &str) -> Option<PointSet> {
    let inner = key.trim().strip_prefix('[')?.strip_suffix(']')?.trim();
    if inner.is_empty() {
        return Some(PointSet::EMPTY);
    }
    let points = inner
        .split(',')
        .map(|x| x.trim().parse::<usize>().ok())
        .collect::<Option<Vec<_>>>()?;
    set_from_points(&points).ok()
}

impl AlgebraJson {
    pub fn from_algebra(b: &InteriorAlgebra) -> AlgebraJson {
        AlgebraJson {
            atoms: b.atoms(),
            boxes: b
                .elements()
                .map(|a| (a.to_string(), set_to_points(b.boxed(a))))
                .collect(),
        }
    }

    /// Every carrier element must have exactly one entry.
    pub fn to_algebra(&self) -> Result<InteriorAlgebra, FormatError> {
        if self.atoms == 0 || self.atoms > topomodal_core::algebra::MAX_ATOMS {
            return Err(if self.atoms == 0 {
                AlgebraError::NoAtoms
            } else {
                AlgebraError::TooManyAtoms(self.atoms)
            }
            .into());
        }
        let mut table: Vec<Option<PointSet>> = vec![None; 1 << self.atoms];
        for (key, value) in &self.boxes {
            let a = parse_set_key(key).ok_or_else(|| FormatError::Key(key.clone()))?;
            if !a.within(self.atoms) {
                return Err(AlgebraError::OutOfRange(a).into());
            }
            let slot = &mut table[a.bits() as usize];
            if slot.is_some() {
                return Err(FormatError::Key(key.clone()));
            }
            *slot = Some(set_from_points(value)?);
        }
        let found = table.iter().filter(|e| e.is_some()).count();
        let table = table
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(AlgebraError::TableLength {
                expected: 1 << self.atoms,
                found,
            })?;
        Ok(InteriorAlgebra::new(self.atoms, table)?)
    }
}

pub fn parse_space(text: &str) -> Result<Space, FormatError> {
    serde_json::from_str::<SpaceJson>(text)?.to_space()
}

pub fn parse_model(text: &str) -> Result<Model, FormatError> {
    serde_json::from_str::<ModelJson>(text)?.to_model()
}

pub fn parse_algebra(text: &str) -> Result<InteriorAlgebra, FormatError> {
    serde_json::from_str::<AlgebraJson>(text)?.to_algebra()
}

pub fn space_to_json(s: &Space) -> String {
    serde_json::to_string(&SpaceJson::from_space(s)).expect("plain data serialises")
}

pub fn model_to_json(m: &Model) -> String {
    serde_json::to_string(&ModelJson::from_model(m)).expect("plain data serialises")
}

pub fn algebra_to_json(b: &InteriorAlgebra) -> String {
    serde_json::to_string(&AlgebraJson::from_algebra(b)).expect("plain data serialises")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_examples() {
        let s = parse_space(r#"{"n": 2, "opens": [[], [0], [0,1]]}"#).unwrap();
        assert_eq!(s, Space::sierpinski());
        assert_eq!(space_to_json(&s), r#"{"n":2,"opens":[[],[0],[0,1]]}"#);
        let e = parse_space(r#"{"n": 2, "opens": [[], [0], [1]]}"#).unwrap_err();
        assert!(matches!(e, FormatError::Space(SpaceError::MissingFullSet)), "{e}");
        let e = parse_space("{\"n\": 2,\n \"opens\": [[], [0,]]}").unwrap_err();
        assert!(matches!(e, FormatError::Json { line: 2, .. }), "{e}");
    }

    #[test]
    fn model_examples() {
        let text = r#"{"space": {"n": 3, "opens": [[], [0,1,2]]}, "val": {"p0": [0,2], "i0": [1]}}"#;
        let m = parse_model(text).unwrap();
        assert_eq!(m.val().prop(0), Some(PointSet::from_points([0, 2])));
        assert_eq!(m.val().nominal(0), Some(1));
        assert_eq!(parse_model(&model_to_json(&m)).unwrap(), m);
        let bad = r#"{"space": {"n": 3, "opens": [[], [0,1,2]]}, "val": {"i0": [0,1]}}"#;
        assert!(matches!(
            parse_model(bad).unwrap_err(),
            FormatError::Semantics(SemanticsError::NominalNotSingleton { .. })
        ));
        let bad_key = r#"{"space": {"n": 1, "opens": [[], [0]]}, "val": {"q0": [0]}}"#;
        assert!(matches!(parse_model(bad_key).unwrap_err(), FormatError::Key(_)));
    }

    #[test]
    fn algebra_examples() {
        let text = r#"{"atoms": 2, "box": {"[]": [], "[0]": [0], "[1]": [], "[0,1]": [0,1]}}"#;
        let b = parse_algebra(text).unwrap();
        assert_eq!(b, topomodal_core::algebra::complex_algebra(&Space::sierpinski()));
        assert_eq!(parse_algebra(&algebra_to_json(&b)).unwrap(), b);
        let missing = r#"{"atoms": 2, "box": {"[]": [], "[0]": [0], "[0,1]": [0,1]}}"#;
        assert!(matches!(
            parse_algebra(missing).unwrap_err(),
            FormatError::Algebra(AlgebraError::TableLength { expected: 4, found: 3 })
        ));
    }
}
