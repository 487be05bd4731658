import os


class Config:
    """Base configuration"""
    SECRET_KEY = os.environ.get('SECRET_KEY') or 'dev-secret-key-change-in-production'

    # Sign refinement (bits of interval precision)
    FOLDQ_PRECISION = int(os.environ.get('FOLDQ_PRECISION') or 53)
    FOLDQ_MAX_PRECISION = int(os.environ.get('FOLDQ_MAX_PRECISION') or 4096)

    # Verification sweeps
    DEFAULT_DEPTH = int(os.environ.get('FOLDQ_DEPTH') or 10)
    DEFAULT_SEED = int(os.environ.get('FOLDQ_SEED') or 2024)
    DEFAULT_WORDS = int(os.environ.get('FOLDQ_WORDS') or 500)
    DEFAULT_WORD_LENGTH = int(os.environ.get('FOLDQ_WORD_LENGTH') or 10)

    # Folding types accepted by the CLI and the API
    SUPPORTED_TYPES = [
        ('A3', 'A3 onto I2(4)'),
        ('A5', 'A5 onto I2(6)'),
        ('A7', 'A7 onto I2(8)'),
        ('A9', 'A9 onto I2(10)'),
        ('A11', 'A11 onto I2(12)'),
        ('D4', 'D4 onto I2(6)'),
        ('D5', 'D5 onto I2(8)'),
        ('D6', 'D6 onto I2(10)'),
        ('D7', 'D7 onto I2(12)'),
        ('D8', 'D8 onto I2(14)'),
        ('D9', 'D9 onto I2(16)'),
        ('E6', 'E6 onto I2(12)'),
        ('E7', 'E7 onto I2(18)'),
        ('E8', 'E8 onto I2(30)'),
    ]

    # Types exercised by `verify --all`
    VERIFY_TYPES = ['A3', 'A5', 'A7', 'A9', 'A11', 'D4', 'D5', 'D6', 'D7', 'D8', 'D9', 'E6', 'E7', 'E8']

    # Types used for the tilting equivalence check
    TILTING_TYPES = ['A7', 'D5', 'E6']

    # Types where Hom and Ext are cross-checked against mesh knitting
    ORACLE_TYPES = ['A3', 'A5', 'A7', 'D4', 'D5', 'E6']

    # Figures
    SVG_SCALE = float(os.environ.get('FOLDQ_SVG_SCALE') or 40.0)
    SVG_DIGITS = 12

    REPORT_SCHEMA_VERSION = '1.0'


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    DEFAULT_WORDS = 40
    DEFAULT_DEPTH = 6
    VERIFY_TYPES = ['A3', 'A7', 'D4', 'D5', 'E6']


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}


def get_config(env=None):
    """Return the configuration class for env (defaults to FLASK_ENV)"""
    env = env or os.environ.get('FLASK_ENV', 'default')
    return config.get(env, config['default'])
