import functools


def memo(fn):
    cache = {}

    @functools.wraps(fn)
    def wrapper(*args):
        if args not in cache:
            cache[args] = fn(*args)
        return cache[args]

    return wrapper


@memo
def fib(n):
    # comment with def fake(): inside
    if n < 2:
        return n
    return fib(n - 1) + fib(n - 2)


TEXT = """
def fib(n):
    return 0
"""
