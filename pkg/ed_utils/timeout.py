from functools import wraps
from queue import Queue
from threading import Thread


def _run_into(box: Queue, func, args, kwargs) -> None:
    try:
        box.put((True, func(*args, **kwargs)))
    except Exception as e:
        box.put((False, e))


def timeout(sec: float = 3):
    """
    Fail the wrapped test after sec seconds. The worker thread is a daemon
    and cannot be stopped, so it runs on in the background.
    """
    def decorate(func):
        @wraps(func)
        def guarded(*args, **kwargs):
            box: Queue = Queue(maxsize=1)
            worker = Thread(target=_run_into, args=(box, func, args, kwargs), daemon=True)
            worker.start()
            worker.join(sec)
            if worker.is_alive():
                raise TimeoutError(f"{func.__name__} timed out after {sec} seconds")
            ok, value = box.get()
            if not ok:
                raise value
            return value
        return guarded
    return decorate
