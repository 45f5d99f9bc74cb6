from .coupled_walk import CoupledState, coupled_step, tan_implies_fresh_check, run_coupled

__all__ = ['CoupledState', 'coupled_step', 'tan_implies_fresh_check', 'run_coupled']
