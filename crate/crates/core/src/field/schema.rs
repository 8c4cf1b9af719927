//! JSON-facing descriptions of fields and characters.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::chars::{normalize, turn, AddChar, MultChar, Turn};
use super::ring::TruncatedField;
use crate::arith::QPower;
use crate::error::{bail, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    pub f: u32,
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootSpec {
    pub zeta_order: i64,
    pub zeta_power: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiValueSpec {
    pub zeta_order: i64,
    pub zeta_power: i64,
    #[serde(default)]
    pub q_exp_num: i64,
    #[serde(default = "one")]
    pub q_exp_den: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultCharSpec {
    pub conductor: usize,
    pub pi_value: PiValueSpec,
    #[serde(default)]
    pub unit_images: Vec<RootSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AddCharSpec {
    pub conductor: i64,
    /// Coefficients of the scale unit; missing trailing entries are zero.
    #[serde(default)]
    pub scale_unit: Vec<u8>,
}

fn root_turn(order: i64, power: i64, what: &str) -> Result<Turn> {
    if order <= 0 {
        bail!(Validation, "local-field", "{what}: zeta_order must be positive, got {order}");
    }
    Ok(turn(power, order))
}

fn root_spec(t: Turn) -> RootSpec {
    RootSpec { zeta_order: *t.denom(), zeta_power: *t.numer() }
}

impl FieldSpec {
    pub fn build(&self) -> Result<TruncatedField> {
        TruncatedField::new(self.p, self.f, self.level)
    }

    pub fn of(field: &TruncatedField) -> FieldSpec {
        FieldSpec { p: field.p(), f: field.f(), level: field.level() }
    }
}

impl MultCharSpec {
    pub fn build(&self, field: &TruncatedField) -> Result<MultChar> {
        let pi = self.pi_value;
        let pi_turn = root_turn(pi.zeta_order, pi.zeta_power, "pi_value")?;
        if pi.q_exp_den == 0 {
            bail!(Validation, "local-field", "pi_value: q_exp_den is zero");
        }
        let images = self
            .unit_images
            .iter()
            .enumerate()
            .map(|(i, r)| root_turn(r.zeta_order, r.zeta_power, &format!("unit_images[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        MultChar::new(field, self.conductor, pi_turn, QPower(Ratio::new(pi.q_exp_num, pi.q_exp_den)), images)
    }

    pub fn of(chi: &MultChar) -> MultCharSpec {
        let t = chi.pi_turn();
        let e = chi.pi_qexp().0;
        MultCharSpec {
            conductor: chi.conductor(),
            pi_value: PiValueSpec {
                zeta_order: *t.denom(),
                zeta_power: *t.numer(),
                q_exp_num: *e.numer(),
                q_exp_den: *e.denom(),
            },
            unit_images: chi.images().iter().map(|&x| root_spec(normalize(x))).collect(),
        }
    }
}

impl AddCharSpec {
    pub fn build(&self, field: &TruncatedField) -> Result<AddChar> {
        let mut scale = if self.scale_unit.is_empty() { vec![1] } else { self.scale_unit.clone() };
        if scale.len() > field.level() {
            bail!(
                Validation,
                "local-field",
                "scale_unit has {} coefficients, field level is {}",
                scale.len(),
                field.level()
            );
        }
        scale.resize(field.level(), 0);
        AddChar::new(field, self.conductor, scale)
    }

    pub fn of(psi: &AddChar) -> AddCharSpec {
        let mut s = psi.scale().to_vec();
        while s.len() > 1 && s.last() == Some(&0) {
            s.pop();
        }
        AddCharSpec { conductor: psi.conductor(), scale_unit: s }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::chars::characters_up_to;

    #[test]
    fn mult_char_round_trip() {
        let r = FieldSpec { p: 3, f: 1, level: 3 }.build().unwrap();
        for chi in characters_up_to(&r, 3, turn(1, 6), QPower::new(-1, 2)) {
            let spec = MultCharSpec::of(&chi);
            let json = serde_json::to_string(&spec).unwrap();
            let back: MultCharSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.build(&r).unwrap(), chi);
        }
    }

    #[test]
    fn add_char_round_trip() {
        let r = FieldSpec { p: 5, f: 1, level: 3 }.build().unwrap();
        let psi = AddChar::new(&r, -2, vec![3, 0, 1]).unwrap();
        let spec = AddCharSpec::of(&psi);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"conductor":-2,"scale_unit":[3,0,1]}"#);
        assert_eq!(serde_json::from_str::<AddCharSpec>(&json).unwrap().build(&r).unwrap(), psi);
    }

    #[test]
    fn legendre_from_json() {
        let r = FieldSpec { p: 3, f: 1, level: 1 }.build().unwrap();
        let spec: MultCharSpec = serde_json::from_str(
            r#"{"conductor":1,"pi_value":{"zeta_order":1,"zeta_power":0},"unit_images":[{"zeta_order":2,"zeta_power":1}]}"#,
        )
        .unwrap();
        assert_eq!(spec.build(&r).unwrap().unit_order(), 2);
        let bad: MultCharSpec = serde_json::from_str(
            r#"{"conductor":1,"pi_value":{"zeta_order":0,"zeta_power":0},"unit_images":[{"zeta_order":2,"zeta_power":1}]}"#,
        )
        .unwrap();
        assert!(bad.build(&r).is_err());
    }
}
