"""Jacob's ladder and the Z_{zeta,Q^2} transformation of elementary signals."""
from .config import DEFAULT, EULER_GAMMA, RunConfig
from .ladder import (IterationChain, LadderTable, build_table, complementarity_report,
                     forward_iterate, integrate_z_squared, iteration_chain, load_table,
                     phi1, phi1_inverse, phi1_prime, reverse_iterate, save_table)
from .primes import pi_asymptotic, prime_pi
from .signals import (SignalClass, SignalSpec, TelegraphicSignal, classify_signal, schedule,
                      telegraphic_output)
from .transform import (MeanValueSolution, TransformReport, beta_nodes, check_u_bound,
                        gap_report, mean_h, mean_value_point, power_theorem_check,
                        shifted_power_transform, z_transform)
from .zeta import (SpectrumDescriptor, ZEvaluation, local_spectrum, spectral_z, theta, z,
                   z_euler_maclaurin, z_riemann_siegel, zeta_ratio_sq)

__version__ = "0.1.0"
