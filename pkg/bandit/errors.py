class BanditError(Exception):
    """Базовое исключение потокового бандит-инструментария."""


class InvalidParamsError(BanditError, ValueError):
    """Параметры вне допустимой области (l < 0, j < 1, k < 1 и т.п.)."""


class InvalidInputError(BanditError, ValueError):
    """Некорректный вход алгоритма: пустой поток, n < k, пустое множество выживших."""


class NoCurrentArmError(BanditError, RuntimeError):
    """Курсор не указывает на руку (конец потока или проход ещё не начат)."""


class StaleSessionError(BanditError, RuntimeError):
    """Однопроходный алгоритм запущен на уже использованной сессии."""


class InvalidSpecError(BanditError, ValueError):
    """Спецификация экземпляра недопустима."""


class InvalidInstanceError(BanditError, ValueError):
    """Экземпляр не подходит для расчёта (например, Δ_2 = 0)."""


class ConfigError(BanditError, ValueError):
    """Неизвестный алгоритм или ключ в конфигурации запуска."""


class RoundLimitError(BanditError, RuntimeError):
    """ID-BAI превысил предельное число раундов."""
