from bandit.instance import BanditInstance
from bandit.stream import StreamSession


def deterministic_session(means, seed: int = 0) -> StreamSession:
    return StreamSession(BanditInstance.from_means(means, "deterministic"), seed=seed)


def bernoulli_session(means, seed: int = 0) -> StreamSession:
    return StreamSession(BanditInstance.from_means(means, "bernoulli"), seed=seed)
