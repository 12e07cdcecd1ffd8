use std::sync::Arc;

use num_rational::Ratio;

use crate::group::ClassStructure;

use super::CharError;

/// An integer-valued function constant on conjugacy classes.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    classes: Arc<ClassStructure>,
    values: Vec<i64>,
}

impl ClassFunction {
    pub fn from_class_values(classes: Arc<ClassStructure>, values: Vec<i64>) -> Result<Self, CharError> {
        if values.len() != classes.len() {
            return Err(CharError::Shape(format!(
                "{} values for {} classes",
                values.len(),
                classes.len()
            )));
        }
        Ok(ClassFunction { classes, values })
    }

    /// Evaluates `f` on every element and checks that it is a class function.
    pub fn from_element_fn(classes: Arc<ClassStructure>, f: impl Fn(usize) -> i64) -> Result<Self, CharError> {
        let mut values = Vec::with_capacity(classes.len());
        for class in classes.classes() {
            let v = f(class.representative);
            if let Some(&g) = class.members.iter().find(|&&g| f(g) != v) {
                return Err(CharError::NotClassFunction { element: g });
            }
            values.push(v);
        }
        Ok(ClassFunction { classes, values })
    }

    pub fn constant(classes: Arc<ClassStructure>, c: i64) -> Self {
        let values = vec![c; classes.len()];
        ClassFunction { classes, values }
    }

    pub fn classes(&self) -> &Arc<ClassStructure> {
        &self.classes
    }

    pub fn class_values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub fn value_at(&self, g: usize) -> i64 {
        self.values[self.classes.class_of(g)]
    }

    fn same_group(&self, other: &ClassFunction) -> Result<(), CharError> {
        if Arc::ptr_eq(&self.classes, &other.classes) || self.classes == other.classes {
            Ok(())
        } else {
            Err(CharError::MismatchedGroups)
        }
    }

    /// Pointwise product; the character of the tensor product.
    pub fn product(&self, other: &ClassFunction) -> Result<ClassFunction, CharError> {
        self.same_group(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(ClassFunction { classes: self.classes.clone(), values })
    }

    pub fn difference(&self, other: &ClassFunction) -> Result<ClassFunction, CharError> {
        self.same_group(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(ClassFunction { classes: self.classes.clone(), values })
    }
}

/// `⟨f, g⟩ = (1/|G|) Σ_x f(x)·g(x)`; the characters here are real so no
/// conjugation is applied.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<Ratio<i64>, CharError> {
    f.same_group(g)?;
    let total: i64 = f
        .classes
        .classes()
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(c, (a, b))| c.size() as i64 * a * b)
        .sum();
    Ok(Ratio::new(total, f.classes.group_order() as i64))
}
