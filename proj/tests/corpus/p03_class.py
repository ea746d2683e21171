class Walker:
    def __init__(self, start):
        self.pos = start

    def step(self, delta):
        self.pos += delta
        return self.pos


def evaluate(candidate,
             weights=(1.0, 2.0),
             bias=0.0):
    total = sum(w * c for w, c in zip(weights, candidate))
    return total + bias


w = Walker(0)
print(evaluate([1, 2]))
