from setuptools import setup

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name="tunnelzilla",
    version="0.2.0",
    description="1-D quantum tunneling: barrier transmission, wave packets, uncertainty relations and tunneling times",
    url="https://github.com/sandboxzilla/tunnelzilla.git",
    author="Erol Yesin",
    author_email="erol@sandboxzilla.net",
    license="MIT",
    packages=["tunnelzilla",
              "tunnelzilla.utils",
              "tunnelzilla.physics",
              "tunnelzilla.cli",],
    python_requires=">=3.8",
    install_requires=["numpy>=1.20",
                      "scipy>=1.6",],
    extras_require={"test": ["pytest>=6.0"]},
    entry_points={"console_scripts": ["tunnelzilla = tunnelzilla.cli.main:main"]},
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: POSIX :: Linux',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering :: Physics',
    ],
    long_description=long_description,
    long_description_content_type="text/markdown",
)
