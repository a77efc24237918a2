import queue
import threading
from typing import Any, Callable, Sequence

# Jobs are independent zero-argument callables. Results come back in submission
# order whatever the thread scheduling, so reductions stay deterministic.


def _worker_loop(job_queue: queue.Queue, results: list, failures: dict):
    while True:
        task = job_queue.get()
        if task is None:
            job_queue.task_done()
            break
        index, func = task
        try:
            results[index] = func()
        except Exception as e:
            failures[index] = e
        finally:
            job_queue.task_done()


def run_jobs(jobs: Sequence[Callable[[], Any]], workers: int = 1) -> list[Any]:
    """Run jobs on a pool of `workers` threads and return their results in order."""
    if workers <= 1 or len(jobs) <= 1:
        return [job() for job in jobs]

    job_queue: queue.Queue = queue.Queue()
    results: list[Any] = [None] * len(jobs)
    failures: dict[int, Exception] = {}
    threads = [
        threading.Thread(target=_worker_loop, args=(job_queue, results, failures), daemon=True)
        for _ in range(min(workers, len(jobs)))
    ]
    for thread in threads:
        thread.start()
    for index, job in enumerate(jobs):
        job_queue.put((index, job))
    for _ in threads:
        job_queue.put(None)
    job_queue.join()
    for thread in threads:
        thread.join()

    if failures:
        # Re-raise the first failure in submission order.
        raise failures[min(failures)]
    return results
