from lsgc.utils.loggable import Loggable

__all__ = ["Loggable"]
