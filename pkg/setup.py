import re
from pathlib import Path

from setuptools import setup, find_packages

HERE = Path(__file__).parent
VERSION = re.search(r'__version__ = "([^"]+)"', (HERE / "esl_apps" / "__init__.py").read_text()).group(1)


setup(
    name="esl-apps",
    version=VERSION,
    packages=find_packages(exclude=["examples", "examples.*"]),
    include_package_data=True,
    install_requires=[
        "Django>=5.0.0",
        "django-environ>=0.11.0",
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pandas>=2.0.0",
        "POT>=0.9.0",
        "matplotlib>=3.7.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.3.0",
            "pytest-django>=4.5.0",
            "factory-boy>=3.3.0",
            "hypothesis>=6.80.0",
            "coverage>=7.2.0",
            "black>=23.0.0",
            "flake8>=6.0.0",
            "isort>=5.12.0",
            "pre-commit>=3.3.0",
        ],
    },
    description="Occupancy-measure geometry of tabular reinforcement learning: effort of sequential learning and optimal movement ratio",
    long_description=(HERE / "README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Framework :: Django",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords=[
        "reinforcement-learning",
        "optimal-transport",
        "wasserstein",
        "occupancy-measure",
        "gridworld",
        "q-learning",
        "ucrl2",
        "psrl",
    ],
    python_requires=">=3.10",
    entry_points={
        "console_scripts": [
            "esl-admin=esl_apps.management:main",
        ],
    },
    zip_safe=False,
)
