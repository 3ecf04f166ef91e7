use supercohom_core::{Field, PrimeField, Rationals, SuperAlgebra};

use crate::error::{CliError, Result};

/// An algebra over whichever field its input declared.
#[derive(Clone, Debug)]
pub enum AnyAlgebra {
    Rational(SuperAlgebra<Rationals>),
    Prime(SuperAlgebra<PrimeField>),
}

/// Runs `$body` with `$g` bound to the concrete algebra.
#[macro_export]
macro_rules! with_algebra {
    ($any:expr, $g:ident => $body:expr) => {
        match $any {
            $crate::any::AnyAlgebra::Rational($g) => $body,
            $crate::any::AnyAlgebra::Prime($g) => $body,
        }
    };
}

impl AnyAlgebra {
    pub fn field_label(&self) -> String {
        with_algebra!(self, g => g.field().descriptor().to_string())
    }

    pub fn label(&self) -> String {
        with_algebra!(self, g => g.label())
    }

    /// The algebra over `F_p`, reducing rational constants when needed.
    pub fn over_prime(&self, p: u64) -> Result<SuperAlgebra<PrimeField>> {
        let field = PrimeField::new(p).map_err(|e| CliError::Usage(format!("--p: {e}")))?;
        match self {
            AnyAlgebra::Prime(g) if g.field().modulus() == p => Ok(g.clone()),
            AnyAlgebra::Prime(g) => Err(CliError::Usage(format!(
                "algebra is defined over {}, cannot reinterpret over F_{p}",
                g.field().descriptor()
            ))),
            AnyAlgebra::Rational(g) => Ok(g.map_field(&field, |c| field.from_ratio(c.numer(), c.denom()))?),
        }
    }
}
