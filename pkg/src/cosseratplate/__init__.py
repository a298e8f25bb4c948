"""Modal analysis of Cosserat (micropolar) elastic plates.

Computes natural frequencies of square micropolar plates from a
nine-variable plate kinematics and validates them against the exact
three-dimensional Cosserat elastodynamics eigenproblem solved by Chebyshev
collocation through the thickness.
"""
from .material import (MaterialParams, MicroInertia, ReciprocalModuli,
                       RotationConvention, TechnicalParams, convert_technical,
                       recover_technical, reciprocal_moduli, rotate_inertia,
                       validate_energy_positivity)
from .plate import (KinematicVariable, ModalSystem, ModeClass, PlateGeometry,
                    PlateCoefficients, Spectrum, assemble_modal_system,
                    classify_modes, plate_coefficients, plate_spectrum,
                    reconstruct_3d_fields, resultants_from_kinematics)

__all__ = [
    "MaterialParams", "MicroInertia", "ReciprocalModuli", "RotationConvention",
    "TechnicalParams", "convert_technical", "recover_technical",
    "reciprocal_moduli", "rotate_inertia", "validate_energy_positivity",
    "KinematicVariable", "ModalSystem", "ModeClass", "PlateGeometry",
    "PlateCoefficients", "Spectrum", "assemble_modal_system", "classify_modes",
    "plate_coefficients", "plate_spectrum", "reconstruct_3d_fields",
    "resultants_from_kinematics",
]

__version__ = "0.1.0"
