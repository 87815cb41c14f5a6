# coding=utf-8

"""
Graceful interrupt handler as a context manager.  The sweep loop checks ``interrupted`` between grid
points so a ^C finishes the record in flight, keeps the journal consistent and stops.

Can be nested.
"""

import logging
import signal
import threading
from typing import Sequence

__docformat__ = 'restructuredtext en'
__all__ = ('GracefulInterruptHandler',)


class GracefulInterruptHandler(object):
    """
    Example Usage::

        with GracefulInterruptHandler() as handler:
            for params in grid:
                if handler.interrupted:
                    break
                journal(evaluate_point(params, config))
    """

    def __init__(self, signals: Sequence[int] = (signal.SIGINT, signal.SIGTERM)):
        self.signals = tuple(signals)
        self.interrupted = False
        self.released = False
        self.original_handlers = {}

    def __enter__(self) -> 'GracefulInterruptHandler':
        return self.capture()

    def capture(self) -> 'GracefulInterruptHandler':
        """
        Capture the signals.  Useful when not using the "with GracefulInterruptHandler" syntax.
        Outside the main thread signals cannot be captured and the handler only serves as a flag.
        """
        self.interrupted = False
        self.released = False
        if threading.current_thread() is not threading.main_thread():
            self.released = True
            return self

        # noinspection PyUnusedLocal
        def handler(signum, frame):
            logging.warning(f"received {signal.Signals(signum).name}; stopping after the current point")
            self.release()
            self.interrupted = True

        for sig in self.signals:
            self.original_handlers[sig] = signal.getsignal(sig)
            signal.signal(sig, handler)
        return self

    # noinspection PyUnusedLocal,PyShadowingBuiltins
    def __exit__(self, type, value, tb):
        self.release()

    def release(self) -> bool:
        """restore the original signal handlers"""
        if self.released:
            return False
        for sig, original in self.original_handlers.items():
            signal.signal(sig, original)
        self.released = True
        return True
