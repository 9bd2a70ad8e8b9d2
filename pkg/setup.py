"""
setuptools build script for Wigner Lift
Usage: pip install .
"""

from setuptools import setup

PACKAGES = ['config', 'core', 'cli']

INSTALL_REQUIRES = [
    'numpy>=1.24.0',
    'scipy>=1.10.0',
    'SQLAlchemy>=2.0.0',
    'python-docx>=0.8.11',
]

EXTRAS_REQUIRE = {
    'test': ['pytest>=7.0.0', 'hypothesis>=6.0.0'],
}

setup(
    name='wigner-lift',
    version='1.0.0',
    description='Reconstruct the unitary or antiunitary lift of a ray-space symmetry',
    py_modules=['main'],
    packages=PACKAGES,
    python_requires='>=3.9',
    install_requires=INSTALL_REQUIRES,
    extras_require=EXTRAS_REQUIRE,
    entry_points={
        'console_scripts': ['wigner-lift=main:main'],
    },
)
