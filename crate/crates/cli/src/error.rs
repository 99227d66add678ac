use serde_json::{json, Value};
use skewgal::embed::EmbedError;
use skewgal::ffield::FieldError;
use skewgal::groups::GroupError;
use skewgal::orepoly::OreError;
use skewgal::quat::QuatError;
use skewgal::splitcon::SplitconError;

pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_UNCERTIFIED: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
    pub details: Option<Value>,
}

/// Variant name from the `Debug` form, e.g. `CoprimalityFailure`.
fn variant<E: std::fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

impl CliError {
    pub fn parse(kind: &str, message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, kind: kind.into(), message: message.into(), details: None }
    }

    fn domain<E: std::fmt::Debug + std::fmt::Display>(e: &E) -> Self {
        CliError { code: EXIT_DOMAIN, kind: variant(e), message: e.to_string(), details: None }
    }

    pub fn uncertified(message: impl Into<String>, details: Value) -> Self {
        CliError { code: EXIT_UNCERTIFIED, kind: "CertificationFailure".into(), message: message.into(), details: Some(details) }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind, "message": self.message });
        if let Some(d) = &self.details {
            v["details"] = d.clone();
        }
        v
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Descriptor(_) => CliError::parse("Descriptor", e.to_string()),
            _ => CliError::domain(&e),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::domain(&e)
    }
}

impl From<EmbedError> for CliError {
    fn from(e: EmbedError) -> Self {
        match e {
            EmbedError::Field(f) => f.into(),
            EmbedError::Group(g) => g.into(),
            EmbedError::CoprimalityFailure { d, degree, ref extensions } => {
                let mut err = CliError::domain(&e);
                err.details = Some(json!({ "d": d, "degree": degree, "extensions": extensions }));
                err
            }
            _ => CliError::domain(&e),
        }
    }
}

impl From<OreError> for CliError {
    fn from(e: OreError) -> Self {
        match e {
            OreError::Field(f) => f.into(),
            _ => CliError::domain(&e),
        }
    }
}

impl From<SplitconError> for CliError {
    fn from(e: SplitconError) -> Self {
        match e {
            SplitconError::Parse(_) => CliError::parse("Spec", e.to_string()),
            SplitconError::IterationCap { ref best, .. } => {
                let details = serde_json::to_value(best).unwrap_or(Value::Null);
                CliError::uncertified(e.to_string(), details)
            }
            _ => CliError::domain(&e),
        }
    }
}

impl From<QuatError> for CliError {
    fn from(e: QuatError) -> Self {
        match e {
            QuatError::Parse(_) => CliError::parse("Descriptor", e.to_string()),
            _ => CliError::domain(&e),
        }
    }
}
