from .run_monitor import RunMonitor

__all__ = ['RunMonitor']
